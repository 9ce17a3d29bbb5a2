"""From a toy dictionary to a grounding set.

Builds the definitional digraph of a fifteen-word dictionary, trims it to
its kernel, reduces the kernel, and finishes with the exact solver.  The
result is a smallest set of words from which every other word of the core
can be defined.

    python demos/mini_dictionary.py
"""
from pathlib import Path

from groundkit import exact_mfvs, is_fvs
from groundkit.dictionary import build_dictionary_digraph, read_dictionary, read_stoplist
from groundkit.metrics import format_table, metrics, run_pipeline

DATA = Path(__file__).parent / "data"

words = read_dictionary(DATA / "mini_dictionary.jsonl")
g = build_dictionary_digraph(words, read_stoplist(DATA / "stoplist.txt"))
print(f"{g.num_vertices} words, {g.num_arcs} definitional arcs")

res = run_pipeline(g)
print(f"kernel: {sorted(res.kernel.kernel.labels())}")

trace = res.confluent_trace
forced = sorted(g.label(u) for u in trace.included)
print(f"reductions forced {forced}, left {sorted(res.confluent.labels())}")

rest = exact_mfvs(res.confluent, all_witnesses=False)
grounding = trace.included | rest.witness
assert is_fvs(g, grounding)
print(f"grounding set ({len(grounding)} words): {sorted(g.label(u) for u in grounding)}")
print()
print(format_table({"mini": metrics(res)}), end="")
