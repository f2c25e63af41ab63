"""Exact computations on finite dendrites and group actions on them."""

from .tree import Dendrite, Germ, InputError, Interior, Point, Vertex, path_tree, star
from .subsets import ClosedSet

__all__ = [
    "ClosedSet",
    "Dendrite",
    "Germ",
    "InputError",
    "Interior",
    "Point",
    "Vertex",
    "path_tree",
    "star",
]
