"""Plain definitional digraph built from a raw dictionary.

Only the first definition of each lexeme is used.  Every token of that
definition that survives the closed-class stoplist gets an arc towards the
lexeme it helps define.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Mapping

from .digraph import Digraph

_WORD = re.compile(r"[^\W\d_]+")


class DictionaryFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


RawDictionary = Mapping[str, list]


def tokenize(definition: str) -> list[str]:
    """Lowercase letter runs; anything else separates tokens."""
    return _WORD.findall(definition.lower())


def build_dictionary_digraph(dictionary: RawDictionary, stop: Iterable[str] = ()) -> Digraph:
    if not dictionary:
        raise ValueError("empty dictionary")
    stop = {w.lower() for w in stop}
    g = Digraph()
    firsts = []
    for lexeme, definitions in dictionary.items():
        if not definitions or not definitions[0]:
            raise DictionaryFormatError(f"{lexeme!r} has no definition")
        lex = lexeme.lower()
        firsts.append((g.add_vertex(lex), definitions[0]))
    for w, text in firsts:
        for tok in tokenize(text):
            if tok not in stop:
                g.add_arc(g.add_vertex(tok), w)
    return g


def loads_dictionary(text: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DictionaryFormatError(exc.msg, no) from None
        if not isinstance(obj, dict) or not isinstance(obj.get("lexeme"), str):
            raise DictionaryFormatError("expected an object with a string 'lexeme'", no)
        defs = obj.get("definitions")
        if not isinstance(defs, list) or not defs or not all(isinstance(d, str) and d.strip() for d in defs):
            raise DictionaryFormatError("'definitions' must be a non-empty list of non-empty strings", no)
        # a repeated headword appends its senses after the earlier ones
        out.setdefault(obj["lexeme"], []).extend(defs)
    return out


def read_dictionary(path: str | Path) -> dict[str, list[str]]:
    return loads_dictionary(Path(path).read_text(encoding="utf-8"))


def read_stoplist(path: str | Path) -> set[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        w = line.strip()
        if w and not w.startswith("#"):
            words.add(w.lower())
    return words
