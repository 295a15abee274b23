#!/usr/bin/env python3

from bullet import Bullet
from errors import RopError
from . import ModuleInterface, CommonStates

class PowerModule(ModuleInterface):
    """Power tables for planning a meta-analysis"""

    def get_name(self) -> str:
        return "power"

    def get_states(self) -> list:
        return ["work_with_power", "power_curve", "vote_collapse"]

    def get_menu_options(self) -> list:
        return ["Power Analysis"]

    def get_choice_to_state_mapping(self) -> dict:
        return {"Power Analysis": "work_with_power"}

    def execute_state(self, state: str, state_machine) -> str:
        try:
            if state == "work_with_power":
                return self._execute_work_with_power()
            elif state == "power_curve":
                return self._execute_power_curve()
            elif state == "vote_collapse":
                return self._execute_vote_collapse()
        except (RopError, ValueError) as error:
            print(f"Error: {error}")
            input("Press Enter to continue...")
            return "work_with_power"
        return CommonStates.MAIN_MENU

    def _execute_work_with_power(self) -> str:
        print("\n=== Power Analysis ===")
        cli = Bullet(
            prompt="Which table?",
            choices=["rOP Power Curve", "Vote Counting vs rOP over K", "Back to Main Menu"],
            bullet="→",
            margin=2,
            shift=0,
        )
        result = cli.launch()
        if result == "rOP Power Curve":
            return "power_curve"
        elif result == "Vote Counting vs rOP over K":
            return "vote_collapse"
        return CommonStates.MAIN_MENU

    def _execute_power_curve(self) -> str:
        from power_lab import power_curve
        K = int(input("Number of studies K: "))
        vary = Bullet(prompt="Sweep:", choices=["r", "r0"], bullet="→", margin=2, shift=0).launch()
        fixed = int(input("Fixed r0: " if vary == "r" else "Fixed r: "))
        alpha = float(input("alpha (empty for 0.05): ") or 0.05)
        beta_prime = float(input("beta' (empty for 1): ") or 1.0)
        table = power_curve(K, vary, range(1, K + 1), alpha, beta_prime,
                            r=fixed if vary == "r0" else None, r0=fixed if vary == "r" else None)
        print(table.to_string(index=False, float_format=lambda x: f"{x:.4g}"))
        input("Press Enter to continue...")
        return "work_with_power"

    def _execute_vote_collapse(self) -> str:
        from power_lab import count_power, vote_counting_power
        single = float(input("Single-study power (empty for 0.3): ") or 0.3)
        fraction = float(input("Required fraction of studies (empty for 0.5): ") or 0.5)
        print(f"\n{'K':>5}  {'vote counting':>14}  {'rOP-style count':>16}")
        for K in (10, 20, 50, 100, 200):
            vote = vote_counting_power(K, 0.05, single, pi0=fraction)
            count = count_power(K, fraction, single)
            print(f"{K:>5}  {vote:>14.4g}  {count:>16.4g}")
        input("Press Enter to continue...")
        return "work_with_power"
