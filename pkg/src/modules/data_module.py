#!/usr/bin/env python3

from bullet import Bullet, YesNo
from yaspin import yaspin
from errors import RopError
from . import ModuleInterface, CommonStates

class DataModule(ModuleInterface):
    """Loading p-value tables or expression studies into the session"""

    def get_name(self) -> str:
        return "data"

    def get_states(self) -> list:
        return ["work_with_data", "load_pvalues", "load_studies", "show_data"]

    def get_menu_options(self) -> list:
        return ["Load Data"]

    def get_choice_to_state_mapping(self) -> dict:
        return {"Load Data": "work_with_data"}

    def execute_state(self, state: str, state_machine) -> str:
        if state == "work_with_data":
            return self._execute_work_with_data(state_machine)
        elif state == "load_pvalues":
            return self._execute_load_pvalues(state_machine)
        elif state == "load_studies":
            return self._execute_load_studies(state_machine)
        elif state == "show_data":
            return self._execute_show_data(state_machine)
        return CommonStates.MAIN_MENU

    def _execute_work_with_data(self, state_machine) -> str:
        print("\n=== Data ===")
        print(f"Loaded: {state_machine.describe_data()}")
        cli = Bullet(
            prompt="What would you like to load?",
            choices=["P-value Table", "Expression Studies", "Show Loaded Data", "Back to Main Menu"],
            bullet="→",
            margin=2,
            shift=0,
        )
        result = cli.launch()
        if result == "P-value Table":
            return "load_pvalues"
        elif result == "Expression Studies":
            return "load_studies"
        elif result == "Show Loaded Data":
            return "show_data"
        return CommonStates.MAIN_MENU

    def _execute_load_pvalues(self, state_machine) -> str:
        print("\n=== Load P-value Table ===")
        path = input("P-value TSV (genes x studies): ").strip()
        if not path:
            print("Path cannot be empty.")
            input("Press Enter to continue...")
            return "work_with_data"
        opposite = None
        if YesNo("Is there an opposite-tail table for one-sided p-values? ", default="n").launch():
            opposite = input("Opposite-tail TSV: ").strip() or None

        from study_io import load_pvalue_matrix
        try:
            with yaspin(text="Loading p-values..."):
                matrix = load_pvalue_matrix(path, opposite)
        except RopError as error:
            print(f"Error: {error}")
            input("Press Enter to continue...")
            return "work_with_data"
        state_machine.set_matrix(matrix, source=path)
        print(f"Loaded {matrix.display_short()}")
        input("Press Enter to continue...")
        return CommonStates.MAIN_MENU

    def _execute_load_studies(self, state_machine) -> str:
        print("\n=== Load Expression Studies ===")
        expression = [p.strip() for p in input("Expression TSVs (comma separated): ").split(",") if p.strip()]
        labels = [p.strip() for p in input("Label files, same order (comma separated): ").split(",") if p.strip()]
        if not expression:
            print("At least one expression file is needed.")
            input("Press Enter to continue...")
            return "work_with_data"
        one_sided = YesNo("Compute one-sided (left/right) p-values? ", default="n").launch()

        from study_io import load_studies
        from significance import de_test_all
        try:
            with yaspin(text="Loading studies and running Welch tests..."):
                studies = load_studies(expression, labels)
                matrix = de_test_all(studies, one_sided_pair=one_sided)
        except RopError as error:
            print(f"Error: {error}")
            input("Press Enter to continue...")
            return "work_with_data"
        state_machine.set_matrix(matrix, source=", ".join(studies.study_ids), studies=studies)
        print(f"Loaded {studies.display_short()}: {matrix.display_short()}")
        input("Press Enter to continue...")
        return CommonStates.MAIN_MENU

    def _execute_show_data(self, state_machine) -> str:
        if not self.require_matrix(state_machine):
            return "work_with_data"
        print("\n" + "=" * 60)
        print(state_machine.matrix.display_verbose())
        if state_machine.studies is not None:
            for study in state_machine.studies:
                print(f"  {study.display_short()}")
        print("=" * 60)
        input("Press Enter to continue...")
        return "work_with_data"
