"""In-memory triple store with dictionary encoding and three orderings.

Terms are interned to dense integer ids; the same triple set is held in
SPO, POS and OSP nested maps so any bound-position pattern has an index.
Writes are exclusive; match() materializes its result under the lock, so
readers always observe a consistent snapshot.
"""

from __future__ import annotations

import threading
from typing import Iterable, Iterator, Optional

from .kgmodel import Term, Triple, parse_ntriples, serialize_ntriples


class TripleStore:
    def __init__(self):
        self._lock = threading.RLock()
        self._term_ids: dict[Term, int] = {}
        self._terms: list[Term] = []
        self._spo: dict[int, dict[int, set[int]]] = {}
        self._pos: dict[int, dict[int, set[int]]] = {}
        self._osp: dict[int, dict[int, set[int]]] = {}
        self._size = 0

    def _intern(self, term: Term) -> int:
        tid = self._term_ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._term_ids[term] = tid
            self._terms.append(term)
        return tid

    def _lookup(self, term: Term) -> Optional[int]:
        return self._term_ids.get(term)

    def __len__(self) -> int:
        return self._size

    def insert(self, t: Triple) -> bool:
        """Add one triple; False when it was already present."""
        with self._lock:
            s, p, o = self._intern(t.s), self._intern(t.p), self._intern(t.o)
            bucket = self._spo.setdefault(s, {}).setdefault(p, set())
            if o in bucket:
                return False
            bucket.add(o)
            self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
            self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
            self._size += 1
            return True

    def bulk_load(self, triples: Iterable[Triple]) -> int:
        added = 0
        with self._lock:
            for t in triples:
                if self.insert(t):
                    added += 1
        return added

    def match(self, s: Optional[Term] = None, p: Optional[Term] = None,
              o: Optional[Term] = None) -> list[Triple]:
        """Triples agreeing with the bound positions of the pattern."""
        with self._lock:
            return [Triple(self._terms[i], self._terms[j], self._terms[k])
                    for i, j, k in self._match_ids(s, p, o)]

    def count(self, s: Optional[Term] = None, p: Optional[Term] = None,
              o: Optional[Term] = None) -> int:
        if s is None and p is None and o is None:
            return self._size
        with self._lock:
            return sum(1 for _ in self._match_ids(s, p, o))

    def _match_ids(self, s, p, o):
        sid = self._lookup(s) if s is not None else None
        pid = self._lookup(p) if p is not None else None
        oid = self._lookup(o) if o is not None else None
        if (s is not None and sid is None) or (p is not None and pid is None) \
                or (o is not None and oid is None):
            return
        if sid is not None:
            by_p = self._spo.get(sid, {})
            preds = (pid,) if pid is not None else tuple(by_p)
            for j in preds:
                objs = by_p.get(j)
                if objs is None:
                    continue
                if oid is not None:
                    if oid in objs:
                        yield (sid, j, oid)
                else:
                    for k in objs:
                        yield (sid, j, k)
        elif pid is not None:
            by_o = self._pos.get(pid, {})
            objs = (oid,) if oid is not None else tuple(by_o)
            for k in objs:
                subs = by_o.get(k)
                if subs is None:
                    continue
                for i in subs:
                    yield (i, pid, k)
        elif oid is not None:
            by_s = self._osp.get(oid, {})
            for i, preds in by_s.items():
                for j in preds:
                    yield (i, j, oid)
        else:
            for i, by_p in self._spo.items():
                for j, objs in by_p.items():
                    for k in objs:
                        yield (i, j, k)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.match())

    def triples(self) -> list[Triple]:
        return self.match()

    # Convenience accessors used across the service layer.

    def objects(self, s: Term, p: Term) -> list[Term]:
        return [t.o for t in self.match(s, p, None)]

    def subjects(self, p: Term, o: Term) -> list[Term]:
        return [t.s for t in self.match(None, p, o)]

    def has(self, s: Term, p: Term, o: Term) -> bool:
        return bool(self.match(s, p, o))


def load_ntriples_file(path: str) -> TripleStore:
    store = TripleStore()
    with open(path, "r", encoding="utf-8") as fh:
        store.bulk_load(parse_ntriples(fh.read()))
    return store


def save_ntriples_file(store: TripleStore, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_ntriples(store.triples()))
