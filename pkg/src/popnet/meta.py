"""Per-node metadata: external id, display name, popularity, genres, group."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

GENRE_DELIMITER = "|"
_HEADER = ["id", "name", "popularity", "genres", "group"]


@dataclass
class AlignedMeta:
    """Metadata columns reordered to a specific graph's node indices."""

    popularity: np.ndarray
    names: list
    genres: list
    group: list

    def group_mask(self, label: str) -> np.ndarray:
        return np.fromiter((x == label for x in self.group), dtype=bool,
                           count=len(self.group))

    def group_labels(self) -> list:
        """Distinct non-null labels, sorted."""
        return sorted({x for x in self.group if x is not None})


class NodeMetaTable:
    """Rows keyed by external id; popularity is validated into [0, 100]."""

    def __init__(self, ids, names, popularity, genres, group):
        self.ids = list(ids)
        self.names = list(names)
        self.popularity = np.asarray(popularity, dtype=np.float64)
        self.genres = list(genres)
        self.group = list(group)
        if not (len(self.ids) == len(self.names) == self.popularity.shape[0]
                == len(self.genres) == len(self.group)):
            raise ValidationError("metadata columns have inconsistent lengths")
        bad = (self.popularity < 0) | (self.popularity > 100)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValidationError(
                f"popularity {self.popularity[i]} of {self.ids[i]!r} outside [0, 100]"
            )
        self._index: dict = {}
        for row, ext_id in enumerate(self.ids):
            if ext_id in self._index:
                raise ValidationError(f"duplicate metadata id {ext_id!r}")
            self._index[ext_id] = row

    def __len__(self):
        return len(self.ids)

    def __contains__(self, ext_id):
        return ext_id in self._index

    def row(self, ext_id):
        return self._index[ext_id]

    def align(self, graph) -> AlignedMeta:
        """Columns reordered to the graph's indices; every node must be covered."""
        ids = graph.all_ids()
        try:
            rows = [self._index[i] for i in ids]
        except KeyError as e:
            raise ValidationError(f"metadata missing node id {e.args[0]!r}") from None
        return AlignedMeta(
            popularity=self.popularity[rows],
            names=[self.names[r] for r in rows],
            genres=[self.genres[r] for r in rows],
            group=[self.group[r] for r in rows],
        )


def load_node_meta(stream) -> NodeMetaTable:
    """Read the id,name,popularity,genres,group CSV; genres are '|'-delimited."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("metadata file is empty") from None
    header = [h.strip().lstrip("﻿") for h in header]
    if header != _HEADER:
        raise ValidationError(
            f"metadata header must be {','.join(_HEADER)}, got {','.join(header)}"
        )
    ids, names, pops, genres, groups = [], [], [], [], []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 5:
            raise ValidationError(f"line {line_no}: expected 5 fields, got {len(row)}")
        ext_id, name, pop_s, genre_s, group = row
        try:
            pop = float(pop_s)
        except ValueError:
            raise ValidationError(f"line {line_no}: popularity {pop_s!r} not numeric") from None
        if not 0 <= pop <= 100:
            raise ValidationError(f"line {line_no}: popularity {pop} outside [0, 100]")
        ids.append(ext_id)
        names.append(name)
        pops.append(pop)
        genres.append(frozenset(t for t in genre_s.split(GENRE_DELIMITER) if t))
        groups.append(group if group else None)
    return NodeMetaTable(ids, names, pops, genres, groups)


def write_node_meta(meta: NodeMetaTable, stream):
    """Write the CSV format load_node_meta reads; popularity keeps 6 decimals."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(_HEADER)
    for i, ext_id in enumerate(meta.ids):
        writer.writerow([
            ext_id,
            meta.names[i],
            f"{meta.popularity[i]:.6f}",
            GENRE_DELIMITER.join(sorted(meta.genres[i])),
            meta.group[i] or "",
        ])
