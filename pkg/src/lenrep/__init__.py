"""Exact representation theory of bound quiver algebras over prime fields."""
from importlib import resources

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a bundled algebra file, e.g. ``fixture_path("z3")``."""
    return resources.files(__package__).joinpath("fixtures", f"{name}.json")
