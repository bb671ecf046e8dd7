"""Dense real fields, optionally addressing a sub-block of a larger allocation.

A :class:`Field` wraps a numpy array view.  The ghost-cell use case (a halo of
extra entries around the solution domain) is served by :meth:`Field.subblock`,
which addresses only the interior block of a parent allocation; reads and
writes through the field never touch parent entries outside that block.

Solver entry points accept either a :class:`Field` or a plain ``ndarray``
(including strided views); :func:`as_array` performs the coercion.
"""

from __future__ import annotations

import numpy as np

REAL_DTYPES = (np.float32, np.float64)


class Field:
    """A d-dimensional real array (d = 1..3) with explicit sub-block addressing.

    Attributes
    ----------
    data : np.ndarray
        The addressed block (a view into the parent allocation).
    extents : tuple of int
        Per-axis counts of the addressed block.
    offsets : tuple of int
        Per-axis start indices into the parent allocation.
    strides : tuple of int
        Per-axis index steps, in elements (the last axis is contiguous
        for a freshly allocated field; this library uses C order).
    """

    def __init__(self, extents, dtype=np.float64):
        extents = tuple(int(e) for e in extents)
        _check_extents(extents)
        self._parent = np.zeros(extents, dtype=_check_dtype(dtype))
        self._view = self._parent
        self.offsets = (0,) * len(extents)

    @classmethod
    def from_array(cls, array) -> "Field":
        """Wrap an existing array without copying; the field addresses all of it."""
        array = np.asarray(array)
        _check_extents(array.shape)
        _check_dtype(array.dtype)
        f = cls.__new__(cls)
        f._parent = array
        f._view = array
        f.offsets = (0,) * array.ndim
        return f

    @classmethod
    def subblock(cls, parent, offsets, extents) -> "Field":
        """Address the block ``parent[o:o+e, ...]`` of a larger allocation."""
        parent = np.asarray(parent)
        offsets = tuple(int(o) for o in offsets)
        extents = tuple(int(e) for e in extents)
        _check_extents(extents)
        _check_dtype(parent.dtype)
        if not (len(offsets) == len(extents) == parent.ndim):
            raise ValueError(
                f"offsets/extents rank must match parent rank {parent.ndim}"
            )
        for o, e, p in zip(offsets, extents, parent.shape):
            if o < 0 or o + e > p:
                raise ValueError(
                    f"sub-block [{offsets}, {offsets} + {extents}) out of bounds for parent shape {parent.shape}"
                )
        f = cls.__new__(cls)
        f._parent = parent
        f._view = parent[tuple(slice(o, o + e) for o, e in zip(offsets, extents))]
        f.offsets = offsets
        return f

    @property
    def data(self) -> np.ndarray:
        return self._view

    @property
    def parent(self) -> np.ndarray:
        return self._parent

    @property
    def extents(self):
        return self._view.shape

    @property
    def strides(self):
        itemsize = self._view.itemsize
        return tuple(s // itemsize for s in self._view.strides)

    @property
    def dtype(self):
        return self._view.dtype

    @property
    def ndim(self) -> int:
        return self._view.ndim

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._view
        return self._view.astype(dtype)


def as_array(obj) -> np.ndarray:
    """Underlying ndarray of a Field, or the array itself."""
    if isinstance(obj, Field):
        return obj.data
    return np.asarray(obj)


def _check_extents(extents):
    if not 1 <= len(extents) <= 3:
        raise ValueError(f"fields are 1- to 3-dimensional, got rank {len(extents)}")
    if any(e < 1 for e in extents):
        raise ValueError(f"extents must be positive, got {extents}")


def _check_dtype(dtype):
    dtype = np.dtype(dtype)
    if dtype.type not in REAL_DTYPES:
        raise TypeError(f"fields are IEEE single or double precision, got {dtype}")
    return dtype
