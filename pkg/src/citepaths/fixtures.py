"""Small hand-built corpora used as canonical examples.

``fig1a`` / ``fig1b``: four papers in three journals. p4 (A) cites p3 (B) in
both; p3 (B) cites p1 (C) in (a), p2 (B) cites p1 (C) in (b). Both project to
the same journal graph ``A -> B -> C``, but only (a) has a citation path from
A to C.

``fig2a``: five papers in four journals forming an acyclic citation chain
whose journal projection is the cycle ``A -> D -> C -> B -> A``.
"""
from .graph import PaperGraph
from .ingest import load_corpus

_FIG1_METADATA = [("p1", "C", 2001), ("p2", "B", 2002), ("p3", "B", 2003), ("p4", "A", 2004)]

FIXTURES = {
    "fig1a": (_FIG1_METADATA, [("p4", "p3"), ("p3", "p1")]),
    "fig1b": (_FIG1_METADATA, [("p4", "p3"), ("p2", "p1")]),
    "fig2a": (
        [("q1", "A", 2000), ("q2", "B", 2001), ("q3", "C", 2002),
         ("q4", "D", 2003), ("q5", "A", 2004)],
        [("q2", "q1"), ("q3", "q2"), ("q4", "q3"), ("q5", "q4")],
    ),
}


def metadata_tsv(rows):
    lines = ["paper_id\tjournal\tyear"] + [f"{p}\t{j}\t{y}" for p, j, y in rows]
    return ("\n".join(lines) + "\n").encode("utf-8")


def citations_tsv(rows):
    lines = ["citing_id\tcited_id"] + [f"{a}\t{b}" for a, b in rows]
    return ("\n".join(lines) + "\n").encode("utf-8")


def fixture_files(name):
    """(metadata bytes, citation bytes) for a named fixture."""
    meta, cites = FIXTURES[name]
    return metadata_tsv(meta), citations_tsv(cites)


def write_fixture(name, directory):
    """Write ``<name>.metadata.tsv`` and ``<name>.citations.tsv``; return paths."""
    from pathlib import Path
    directory = Path(directory)
    meta, cites = fixture_files(name)
    mpath = directory / f"{name}.metadata.tsv"
    cpath = directory / f"{name}.citations.tsv"
    mpath.write_bytes(meta)
    cpath.write_bytes(cites)
    return mpath, cpath


def load_fixture(name) -> PaperGraph:
    meta, cites = fixture_files(name)
    return load_corpus(meta, cites)
