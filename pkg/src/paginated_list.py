#!/usr/bin/env python3

from typing import List, Callable, Optional, Any
from bullet import Bullet
from enum import Enum

class PaginationAction(Enum):
    """Actions that can be returned from paginated list interactions"""
    PREVIOUS_PAGE = "previous_page"
    NEXT_PAGE = "next_page"
    GO_BACK = "go_back"
    ITEM_SELECTED = "item_selected"
    FILTER_CHANGED = "filter_changed"
    NO_ACTION = "no_action"

class PaginatedListResult:
    """Result object returned from paginated list interactions"""
    def __init__(self, action: PaginationAction, data: Any = None):
        self.action = action
        self.data = data

class PaginatedList:
    """Page-by-page browser over items exposing display_short / display_verbose"""

    PREVIOUS = "← Previous Page"
    NEXT = "→ Next Page"
    BACK = "← Go Back"

    def __init__(self, items: List[Any], items_per_page: int = 10):
        self.items = items
        self.items_per_page = items_per_page
        self.current_page = 0

    def show(self,
             title: str = "Genes",
             filter_type: str = "all",
             on_item_select: Optional[Callable[[Any], PaginatedListResult]] = None,
             show_filter_option: bool = True) -> PaginatedListResult:
        """
        Show one page and wait for a choice

        Args:
            title: Title for the list display
            filter_type: Name of the current filter, shown as a menu entry
            on_item_select: Called with the selected item; details are printed when omitted
            show_filter_option: Whether the filter entry is offered

        Returns:
            PaginatedListResult: Result indicating the action taken
        """
        if not self.items:
            return self._show_empty_list(title, filter_type, show_filter_option)

        total_pages = self.get_total_pages()
        start_idx = self.current_page * self.items_per_page
        end_idx = min(start_idx + self.items_per_page, len(self.items))

        print(f"\nPage {self.current_page + 1} of {total_pages + 1} ({len(self.items)} {filter_type} {title.lower()})")
        print("=" * 50)

        choices = []
        filter_choice = f"Current filter: {filter_type}"
        if show_filter_option:
            choices.append(filter_choice)
        if self.current_page > 0:
            choices.append(self.PREVIOUS)
        for i in range(start_idx, end_idx):
            choices.append(f"{i + 1}. {self._label(self.items[i])}")
        if self.current_page < total_pages:
            choices.append(self.NEXT)
        choices.append(self.BACK)

        cli = Bullet(
            prompt=f"Select one of the {title.lower()} to view details or navigate:",
            choices=choices,
            bullet="→",
            margin=2,
            shift=0,
        )
        result = cli.launch()

        if show_filter_option and result == filter_choice:
            return PaginatedListResult(PaginationAction.FILTER_CHANGED, filter_type)
        if result == self.PREVIOUS:
            self.current_page -= 1
            return PaginatedListResult(PaginationAction.PREVIOUS_PAGE, self.current_page)
        if result == self.NEXT:
            self.current_page += 1
            return PaginatedListResult(PaginationAction.NEXT_PAGE, self.current_page)
        if result == self.BACK:
            return PaginatedListResult(PaginationAction.GO_BACK)

        try:
            item_idx = int(result.split('.')[0]) - 1
        except ValueError:
            return PaginatedListResult(PaginationAction.NO_ACTION)
        if not 0 <= item_idx < len(self.items):
            return PaginatedListResult(PaginationAction.NO_ACTION)
        selected_item = self.items[item_idx]
        if on_item_select:
            return on_item_select(selected_item)
        self._show_item_details(selected_item)
        input("Press Enter to continue...")
        return PaginatedListResult(PaginationAction.ITEM_SELECTED, selected_item)

    @staticmethod
    def _label(item: Any) -> str:
        if hasattr(item, 'display_short'):
            return item.display_short()
        return str(item)

    def _show_empty_list(self, title: str, filter_type: str, show_filter_option: bool) -> PaginatedListResult:
        print(f"\nNo {filter_type} {title.lower()} found.")
        print("=" * 50)

        filter_choice = f"Current filter: {filter_type}"
        choices = [filter_choice, self.BACK] if show_filter_option else [self.BACK]
        cli = Bullet(
            prompt=f"No {title.lower()} found. What would you like to do?",
            choices=choices,
            bullet="→",
            margin=2,
            shift=0,
        )
        result = cli.launch()

        if result == filter_choice:
            return PaginatedListResult(PaginationAction.FILTER_CHANGED, filter_type)
        return PaginatedListResult(PaginationAction.GO_BACK)

    def _show_item_details(self, item: Any):
        print("\n" + "=" * 60)
        print(f"{type(item).__name__.upper()} DETAILS")
        print("=" * 60)
        if hasattr(item, 'display_verbose'):
            print(item.display_verbose())
        else:
            print(str(item))
        print("=" * 60)

    def get_current_page(self) -> int:
        return self.current_page

    def get_total_pages(self) -> int:
        """Index of the last page (0 for a single page)"""
        return max(0, (len(self.items) - 1) // self.items_per_page)

    def get_items_count(self) -> int:
        return len(self.items)


class FilteredPaginatedList(PaginatedList):
    """Paginated list whose visible items can be narrowed by a predicate"""

    def __init__(self, items: List[Any], items_per_page: int = 10):
        super().__init__(items, items_per_page)
        self.all_items = items
        self.current_filter = "all"

    def set_filter(self, filter_func: Callable[[Any], bool], filter_name: str = "filtered"):
        self.items = [item for item in self.all_items if filter_func(item)]
        self.current_filter = filter_name
        self.current_page = 0

    def clear_filter(self):
        self.items = self.all_items
        self.current_filter = "all"
        self.current_page = 0

    def show(self,
             title: str = "Genes",
             filter_type: Optional[str] = None,
             on_item_select: Optional[Callable[[Any], PaginatedListResult]] = None,
             show_filter_option: bool = True) -> PaginatedListResult:
        return super().show(title, filter_type or self.current_filter, on_item_select, show_filter_option)

    def get_current_filter(self) -> str:
        return self.current_filter
