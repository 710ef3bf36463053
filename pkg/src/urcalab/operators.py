"""Thin wrapper around sparse operators plus a plain-text dump format.

The dump is one "row col re im" line per stored entry, preceded by
comment headers carrying the dimension, the entry count and a sha256 of
the metadata json, so runs can be diffed and reloaded byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


def as_csr(op) -> sp.csr_matrix:
    if isinstance(op, SparseOperator):
        return op.matrix
    return sp.csr_matrix(op)


@dataclass
class SparseOperator:
    matrix: sp.csr_matrix
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = sp.csr_matrix(self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def hermiticity_defect(self) -> float:
        diff = self.matrix - self.matrix.conjugate().transpose()
        if diff.nnz == 0:
            return 0.0
        return float(np.abs(diff.data).max())

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def dump(self, path) -> str:
        """Write the operator; returns the metadata hash."""
        coo = self.matrix.tocoo()
        meta_json = json.dumps(self.meta, sort_keys=True)
        digest = hashlib.sha256(meta_json.encode()).hexdigest()
        with open(path, "w") as fh:
            fh.write(f"# name {self.name}\n")
            fh.write(f"# dim {self.dim}\n")
            fh.write(f"# nnz {coo.nnz}\n")
            fh.write(f"# meta_sha256 {digest}\n")
            fh.write(f"# meta {meta_json}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                z = complex(v)
                fh.write(f"{r} {c} {z.real:.17g} {z.imag:.17g}\n")
        return digest


def load_operator(path) -> SparseOperator:
    name, dim, meta = "", None, {}
    rows, cols, vals = [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("name"):
                    name = body[4:].strip()
                elif body.startswith("dim"):
                    dim = int(body.split()[1])
                elif body.startswith("meta_sha256"):
                    pass
                elif body.startswith("meta"):
                    meta = json.loads(body[4:].strip())
                continue
            r, c, re, im = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(float(re) + 1j * float(im))
    if dim is None:
        raise ValueError(f"{path} has no dimension header")
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    return SparseOperator(matrix=mat, name=name, meta=meta)
