#!/usr/bin/env python3

from abc import ABC, abstractmethod
from typing import Dict, List, Optional

class CommonStates:
    """States shared by every module"""
    MAIN_MENU = "main_menu"
    EXIT = "exit"

class ModuleInterface(ABC):
    """A group of shell states with the main-menu entries that lead to them"""
    
    @abstractmethod
    def get_name(self) -> str:
        pass
    
    @abstractmethod
    def get_states(self) -> List[str]:
        """State names handled by this module"""
        pass
    
    @abstractmethod
    def get_menu_options(self) -> List[str]:
        pass
    
    @abstractmethod
    def get_choice_to_state_mapping(self) -> Dict[str, str]:
        pass
    
    @abstractmethod
    def execute_state(self, state: str, state_machine) -> str:
        """Run one state and return the next one"""
        pass

    def require_matrix(self, state_machine) -> bool:
        """Tell the user to load data first when the session has none"""
        if state_machine.matrix is None:
            print("Error: no p-values loaded. Use 'Load Data' first.")
            input("Press Enter to continue...")
            return False
        return True

class ModuleRegistry:
    """Maps states and menu entries to the modules that handle them"""
    
    def __init__(self):
        self.modules: Dict[str, ModuleInterface] = {}
        self.state_handlers: Dict[str, ModuleInterface] = {}
        self.menu_options: List[str] = []
        self.choice_to_state_mapping: Dict[str, str] = {}
    
    def register_module(self, module: ModuleInterface) -> None:
        name = module.get_name()
        if name in self.modules:
            raise ValueError(f"module {name!r} is already registered")
        self.modules[name] = module
        for state_name in module.get_states():
            self.state_handlers[state_name] = module
        self.menu_options.extend(module.get_menu_options())
        self.choice_to_state_mapping.update(module.get_choice_to_state_mapping())
    
    def get_state_handler(self, state: str) -> Optional[ModuleInterface]:
        return self.state_handlers.get(state)
    
    def get_menu_options(self) -> List[str]:
        return self.menu_options.copy()
    
    def get_choice_to_state_mapping(self) -> Dict[str, str]:
        return self.choice_to_state_mapping.copy()
    
    def get_modules(self) -> Dict[str, ModuleInterface]:
        return self.modules.copy()
