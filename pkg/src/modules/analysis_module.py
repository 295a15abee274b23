#!/usr/bin/env python3

from bullet import Bullet, YesNo
from yaspin import yaspin
from errors import RopError
from models import MetaMethodSpec, MetaMethods, PermutationPlan, VoteNull
from models.simulation import InferenceRoute
from paginated_list import FilteredPaginatedList, PaginationAction
from . import ModuleInterface, CommonStates

class AnalysisModule(ModuleInterface):
    """Combining p-values, browsing the ranked genes and choosing r"""

    FDR = 0.05

    def get_name(self) -> str:
        return "analysis"

    def get_states(self) -> list:
        return ["work_with_analysis", "combine", "browse_genes", "select_r", "save_genes"]

    def get_menu_options(self) -> list:
        return ["Meta-analysis"]

    def get_choice_to_state_mapping(self) -> dict:
        return {"Meta-analysis": "work_with_analysis"}

    def execute_state(self, state: str, state_machine) -> str:
        if state == "work_with_analysis":
            return self._execute_work_with_analysis(state_machine)
        if not self.require_matrix(state_machine):
            return CommonStates.MAIN_MENU
        try:
            if state == "combine":
                return self._execute_combine(state_machine)
            elif state == "browse_genes":
                return self._execute_browse_genes(state_machine)
            elif state == "select_r":
                return self._execute_select_r(state_machine)
            elif state == "save_genes":
                return self._execute_save_genes(state_machine)
        except RopError as error:
            print(f"Error: {error}")
            input("Press Enter to continue...")
            return "work_with_analysis"
        return CommonStates.MAIN_MENU

    def _execute_work_with_analysis(self, state_machine) -> str:
        print("\n=== Meta-analysis ===")
        cli = Bullet(
            prompt="What would you like to do?",
            choices=["Combine P-values", "Browse Gene Table", "Select r", "Save Gene Table", "Back to Main Menu"],
            bullet="→",
            margin=2,
            shift=0,
        )
        result = cli.launch()
        return {
            "Combine P-values": "combine",
            "Browse Gene Table": "browse_genes",
            "Select r": "select_r",
            "Save Gene Table": "save_genes",
        }.get(result, CommonStates.MAIN_MENU)

    def _ask_method(self, state_machine) -> MetaMethodSpec:
        cli = Bullet(prompt="Combination method:", choices=list(MetaMethods.ALL), bullet="→", margin=2, shift=0)
        method = cli.launch()
        if method in MetaMethods.ROP_FAMILY:
            K = state_machine.matrix.n_studies
            text = input(f"r (1..{K}, empty for {K // 2 + 1}): ").strip()
            return MetaMethodSpec(method, r=int(text) if text else K // 2 + 1)
        if method == MetaMethods.VOTE_COUNT:
            use_pi0 = YesNo("Test the count against pi0 = 0.5 instead of alpha? ", default="y").launch()
            return MetaMethodSpec(method, vote_null=VoteNull.PI0 if use_pi0 else VoteNull.ALPHA)
        return MetaMethodSpec(method)

    def _execute_combine(self, state_machine) -> str:
        print("\n=== Combine P-values ===")
        try:
            spec = self._ask_method(state_machine)
        except ValueError:
            print("r must be an integer.")
            input("Press Enter to continue...")
            return "work_with_analysis"
        routes = [InferenceRoute.BH, InferenceRoute.BY]
        if state_machine.studies is not None:
            routes.append(InferenceRoute.PERMUTATION)
        route = Bullet(prompt="Inference:", choices=routes, bullet="→", margin=2, shift=0).launch()

        from meta_combine import combine_matrix
        from significance import apply_parametric, apply_permutation, permute_labels
        with yaspin(text=f"Combining with {spec.label()}..."):
            result = combine_matrix(state_machine.matrix, spec)
            if route == InferenceRoute.PERMUTATION:
                plan = PermutationPlan.for_labels(seed=state_machine.seed)
                result = apply_permutation(result, permute_labels(state_machine.studies, plan, spec))
            else:
                result = apply_parametric(result, route)
        state_machine.result = result
        print(f"{result.display_short()}: {result.n_detected(self.FDR)} genes with q <= {self.FDR}")
        input("Press Enter to continue...")
        return "browse_genes"

    def _execute_browse_genes(self, state_machine) -> str:
        if state_machine.result is None:
            print("Nothing combined yet.")
            input("Press Enter to continue...")
            return "work_with_analysis"
        paginated_list = FilteredPaginatedList(state_machine.result.ranked_records())
        while True:
            result = paginated_list.show(title="Genes")
            if result.action == PaginationAction.GO_BACK:
                return "work_with_analysis"
            if result.action == PaginationAction.FILTER_CHANGED:
                if paginated_list.get_current_filter() == "all":
                    paginated_list.set_filter(lambda g: g.q_value <= self.FDR, f"detected (q <= {self.FDR})")
                else:
                    paginated_list.clear_filter()

    def _execute_select_r(self, state_machine) -> str:
        print("\n=== Select r ===")
        from r_advisor import select_r_by_count, select_r_by_pathway
        plan = PermutationPlan.for_pvalues(seed=state_machine.seed)
        with yaspin(text=f"Shuffling p-values {plan.B} times..."):
            counts = select_r_by_count(state_machine.matrix, plan, self.FDR)
        print(counts.display_verbose())
        gmt = input("GMT file for the pathway criterion (empty to skip): ").strip()
        if gmt:
            from study_io import load_gmt
            with yaspin(text="Running the pathway committee..."):
                committee = select_r_by_pathway(state_machine.matrix, load_gmt(gmt))
            print(committee.display_verbose())
        input("Press Enter to continue...")
        return "work_with_analysis"

    def _execute_save_genes(self, state_machine) -> str:
        if state_machine.result is None:
            print("Nothing combined yet.")
            input("Press Enter to continue...")
            return "work_with_analysis"
        path = input("Save gene table to: ").strip()
        if path:
            from study_io import write_table
            write_table(state_machine.result.to_frame(), path)
            print(f"Saved {len(state_machine.result)} genes to {path}")
            input("Press Enter to continue...")
        return "work_with_analysis"
