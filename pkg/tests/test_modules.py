#!/usr/bin/env python3

from collections import deque

from pytest import fixture, raises

import modules.analysis_module
import modules.data_module
import modules.power_module
import paginated_list
import state_machine_modular
from models import PValueMatrix
from modules import CommonStates, ModuleRegistry
from modules.power_module import PowerModule
from paginated_list import FilteredPaginatedList, PaginationAction
from state_machine_modular import StateMachineModular


class Script:
    """Answers for Bullet/YesNo menus and input() prompts, consumed in order"""

    def __init__(self):
        self.choices = deque()
        self.inputs = deque()
        self.prompts = []

    def menu(self, *args, **kwargs):
        script = self

        class Menu:
            def launch(self):
                return script.choices.popleft()
        return Menu()

    def input(self, prompt=''):
        self.prompts.append(prompt)
        return self.inputs.popleft()


@fixture
def script(monkeypatch):
    script = Script()
    for module in (state_machine_modular, modules.data_module, modules.analysis_module,
                   modules.power_module, paginated_list):
        monkeypatch.setattr(module, 'Bullet', script.menu)
        if hasattr(module, 'YesNo'):
            monkeypatch.setattr(module, 'YesNo', script.menu)
    monkeypatch.setattr('builtins.input', script.input)
    return script


def run_until_exit(machine, limit=100):
    for _ in range(limit):
        if machine.is_exit_state():
            return
        machine.execute_current_state()
    raise AssertionError('the shell did not reach the exit state')


def test_registry_collects_states_and_menus():
    machine = StateMachineModular()
    registry = machine.module_registry
    assert registry.get_menu_options() == ['Load Data', 'Meta-analysis', 'Power Analysis']
    assert registry.get_choice_to_state_mapping()['Power Analysis'] == 'work_with_power'
    assert isinstance(registry.get_state_handler('power_curve'), PowerModule)
    assert registry.get_state_handler('nowhere') is None
    with raises(ValueError):
        machine.register_module(PowerModule())


def test_empty_registry():
    registry = ModuleRegistry()
    assert registry.get_menu_options() == []
    assert registry.get_modules() == {}


def test_load_combine_and_browse(script, write_pvalues, table1_genes):
    path = write_pvalues(table1_genes)
    script.choices.extend([
        'Load Data', 'P-value Table', False,
        'Meta-analysis', 'Combine P-values', 'rOP', 'parametric-BH',
        'Current filter: all', '← Go Back', 'Back to Main Menu',
        'Exit',
    ])
    script.inputs.extend([path, '', '4', ''])
    machine = StateMachineModular()
    run_until_exit(machine)
    assert machine.matrix.genes == ['A', 'B', 'C', 'D']
    assert machine.source == path
    assert machine.result.spec.r == 4
    assert machine.result.n_detected(0.05) == 3
    assert not script.choices and not script.inputs


def test_unknown_state_returns_to_the_menu(capsys):
    machine = StateMachineModular()
    machine.current_state = 'nowhere'
    machine.execute_current_state()
    assert machine.current_state == CommonStates.MAIN_MENU
    assert 'Unknown state' in capsys.readouterr().out


def test_analysis_needs_data(script):
    script.inputs.append('')
    machine = StateMachineModular()
    machine.current_state = 'combine'
    machine.execute_current_state()
    assert machine.current_state == CommonStates.MAIN_MENU
    assert machine.result is None


def test_bad_path_stays_in_the_data_menu(script, tmp_path):
    script.choices.append(False)
    script.inputs.extend([str(tmp_path / 'missing.tsv'), ''])
    machine = StateMachineModular()
    machine.current_state = 'load_pvalues'
    machine.execute_current_state()
    assert machine.current_state == 'work_with_data'
    assert machine.matrix is None


def test_power_curve_state(script, capsys):
    script.choices.append('r')
    script.inputs.extend(['5', '3', '', '0.9', ''])
    machine = StateMachineModular()
    machine.current_state = 'power_curve'
    machine.execute_current_state()
    assert machine.current_state == 'work_with_power'
    assert 'power' in capsys.readouterr().out


def test_power_state_reports_bad_numbers(script, capsys):
    script.inputs.extend(['ten', ''])
    machine = StateMachineModular()
    machine.current_state = 'power_curve'
    machine.execute_current_state()
    assert machine.current_state == 'work_with_power'
    assert 'Error:' in capsys.readouterr().out


def test_vote_collapse_table(script, capsys):
    script.inputs.extend(['', '', ''])
    machine = StateMachineModular()
    machine.current_state = 'vote_collapse'
    machine.execute_current_state()
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.strip().startswith(('10 ', '200 ')) for line in lines) == 2


def test_new_data_clears_the_result(rng):
    machine = StateMachineModular()
    machine.result = object()
    matrix = PValueMatrix(['g1', 'g2'], ['a', 'b'], rng.uniform(size=(2, 2)))
    machine.set_matrix(matrix, source='memory')
    assert machine.result is None
    assert machine.describe_data().endswith('from memory')


def test_filtered_list_pages_and_filters(script):
    items = list(range(25))
    listing = FilteredPaginatedList(items, items_per_page=10)
    assert listing.get_total_pages() == 2
    script.choices.extend(['→ Next Page', '← Go Back'])
    assert listing.show().action == PaginationAction.NEXT_PAGE
    assert listing.get_current_page() == 1
    assert listing.show().action == PaginationAction.GO_BACK
    listing.set_filter(lambda x: x % 2 == 0, 'even')
    assert listing.get_items_count() == 13
    assert listing.get_current_page() == 0
    listing.clear_filter()
    assert listing.get_current_filter() == 'all'
    assert listing.get_items_count() == 25


def test_selecting_an_item_shows_details(script, capsys):
    listing = FilteredPaginatedList(['alpha', 'beta'])
    script.choices.append('2. beta')
    script.inputs.append('')
    result = listing.show()
    assert result.action == PaginationAction.ITEM_SELECTED
    assert result.data == 'beta'
    assert 'beta' in capsys.readouterr().out


def test_empty_list_offers_the_filter(script):
    listing = FilteredPaginatedList([])
    script.choices.append('Current filter: all')
    assert listing.show().action == PaginationAction.FILTER_CHANGED
    assert listing.get_total_pages() == 0
