"""Definition AMRs to a definitional digraph.

Reads a PENMAN corpus of eight definition AMRs, some of them malformed in
the ways a sentence-to-graph parser tends to get wrong.  Each entry is
classified, the one fixable entry is patched from its ``::def-amr``
companion, and the survivors are merged into one digraph whose arcs point
from every concept of a definition to the word it defines.

    python demos/amr_corpus.py
"""
from pathlib import Path

from groundkit.amr import classify, load_amr_corpus, union_corpus, validate
from groundkit.digraph import dumps_arc_list

CORPUS = Path(__file__).parent / "data" / "definitions.amr"

entries = load_amr_corpus(CORPUS)
final = classify(entries)
print(f"{'entry':<14}{'as parsed':<22}after patching")
for e in entries:
    print(f"{e.lexeme}.{e.sense:<{13 - len(e.lexeme)}}{validate(e).value:<22}{final[e.key].value}")

res = union_corpus(entries)
print()
for k, v in res.metrics.to_dict().items():
    print(f"  {k:<20}{v}")

print("\ndefinitional arcs (tagged define-01):")
print(dumps_arc_list(res.graph, res.definitional_tags()), end="")
print("\nAMR role edges kept aside:")
for (u, v), tags in res.preserved.items():
    print(f"  {u} -{','.join(sorted(tags))}-> {v}")
