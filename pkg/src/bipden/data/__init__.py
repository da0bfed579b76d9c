"""Bundled datasets."""

from importlib import resources

from ..bigraph import BipartiteGraph, from_edge_list, parse_edge_list


def southern_women() -> BipartiteGraph:
    """The classic Davis Southern women attendance network (18 x 14, 89 edges)."""
    text = resources.files(__package__).joinpath("southern_women.tsv").read_text("utf-8")
    return from_edge_list(parse_edge_list(text))


def southern_women_path() -> str:
    """Filesystem path of the bundled dataset (for CLI examples)."""
    return str(resources.files(__package__).joinpath("southern_women.tsv"))
