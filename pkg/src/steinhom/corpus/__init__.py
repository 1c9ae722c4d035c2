"""Bundled instance files: groupoids, graphs, EP tuples, algebras and unit groups."""
import json
from importlib import resources

KINDS = ("groupoids", "graphs", "ep", "algebras", "units")


def names(kind):
    """Sorted instance names of one kind."""
    folder = resources.files(__name__) / kind
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load(kind, name):
    return json.loads((resources.files(__name__) / kind / f"{name}.json").read_text())


def path(kind, name):
    return resources.files(__name__) / kind / f"{name}.json"
