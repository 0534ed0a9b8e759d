from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any, Iterable

import numpy as np
from scipy import sparse

# products of two residues must fit in int64 with room for one addition
MAX_PRIME = 2**31 - 1


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise FieldError(f"{self.p!r} is not prime")
            if self.p > MAX_PRIME:
                raise FieldError(f"prime {self.p} exceeds {MAX_PRIME}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def tag(self) -> str:
        return "RATIONALS" if self.p is None else "PRIME"

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    def to_json(self) -> Any:
        return "Q" if self.p is None else {"Fp": self.p}

    @classmethod
    def from_json(cls, obj: Any) -> "FieldSpec":
        if obj == "Q":
            return RATIONALS
        if isinstance(obj, dict) and set(obj) == {"Fp"}:
            return cls(int(obj["Fp"]))
        raise FieldError(f"unrecognised field {obj!r}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Accepts ``Q``, ``QQ``, ``F32003``, ``Fp:32003`` or a bare prime."""
        t = text.strip()
        if t.upper() in ("Q", "QQ"):
            return RATIONALS
        for prefix in ("Fp:", "FP:", "F_", "F"):
            if t.startswith(prefix):
                t = t[len(prefix):]
                break
        try:
            return cls(int(t))
        except ValueError:
            raise FieldError(f"unrecognised field {text!r}") from None

    # scalars ---------------------------------------------------------------

    def scalar(self, value) -> Any:
        """Coerce an int, Fraction or exact string to a field element."""
        if isinstance(value, str):
            value = parse_exact(value, allow_fraction=True)
        if isinstance(value, float):
            raise FieldError("floating point scalars are not exact")
        if self.p is None:
            return Fraction(value)
        q = Fraction(value)
        if q.denominator % self.p == 0:
            raise FieldError(f"{value} has denominator divisible by {self.p}")
        return (q.numerator * pow(q.denominator, -1, self.p)) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    # matrices --------------------------------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.p is None:
            out = np.empty((rows, cols), dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one()
        return out

    def matrix(self, rows: Iterable[Iterable], shape: tuple[int, int] | None = None) -> np.ndarray:
        data = [[self.scalar(x) for x in row] for row in rows]
        if shape is None:
            shape = (len(data), len(data[0]) if data else 0)
        out = self.zeros(*shape)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                out[i, j] = x
        return out

    def coerce(self, M) -> np.ndarray:
        """Return ``M`` as a matrix over this field (copying)."""
        A = np.asarray(M)
        if A.ndim != 2:
            raise FieldError(f"expected a 2-d matrix, got shape {A.shape}")
        if self.p is None:
            if A.dtype == object:
                out = np.empty(A.shape, dtype=object)
                flat_in, flat_out = A.ravel(), out.ravel()
                for i in range(flat_in.size):
                    flat_out[i] = Fraction(flat_in[i])
                return out
            if A.dtype.kind not in "iub":
                raise FieldError(f"cannot coerce dtype {A.dtype} exactly")
            return self.matrix(A.tolist(), A.shape)
        if A.dtype == object:
            out = np.zeros(A.shape, dtype=np.int64)
            flat_in, flat_out = A.ravel(), out.ravel()
            for i in range(flat_in.size):
                flat_out[i] = self.scalar(flat_in[i])
            return out
        if A.dtype.kind not in "iub":
            raise FieldError(f"cannot coerce dtype {A.dtype} exactly")
        return np.mod(A.astype(np.int64), self.p)

    def neg(self, M: np.ndarray) -> np.ndarray:
        if self.p is None:
            return -M
        return (-M) % self.p

    def add(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.p is None:
            return A + B
        return (A + B) % self.p

    def scale(self, c, M: np.ndarray) -> np.ndarray:
        c = self.scalar(c)
        if self.p is None:
            return M * c
        return (M * c) % self.p

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Exact matrix product."""
        if A.shape[1] != B.shape[0]:
            raise FieldError(f"shape mismatch {A.shape} @ {B.shape}")
        if self.p is None:
            if A.size == 0 or B.size == 0:
                return self.zeros(A.shape[0], B.shape[1])
            return _rational_mul(A, B)
        inner = A.shape[1]
        if inner * (self.p - 1) ** 2 < 2**63 and _is_sparse(A):
            return np.asarray(sparse.csr_matrix(A) @ B) % self.p
        if inner * (self.p - 1) ** 2 < _FLOAT_EXACT:
            return _float_matmul(A, B) % self.p
        # every partial sum of products must stay below 2**63
        chunk = max(1, (2**63 - 1) // ((self.p - 1) ** 2 + 1))
        if inner <= chunk:
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for s in range(0, inner, chunk):
            out = (out + (A[:, s:s + chunk] @ B[s:s + chunk, :]) % self.p) % self.p
        return out

    def is_zero(self, M: np.ndarray) -> bool:
        if M.size == 0:
            return True
        if self.p is None:
            return all(x == 0 for x in M.ravel())
        return not np.any(M)

    def equal(self, A: np.ndarray, B: np.ndarray) -> bool:
        if A.shape != B.shape:
            return False
        if self.p is None:
            return all(x == y for x, y in zip(A.ravel(), B.ravel()))
        return bool(np.array_equal(A, B))

    def to_strings(self, M: np.ndarray) -> list[list[str]]:
        return [[str(x) for x in row] for row in M.tolist()]


RATIONALS = FieldSpec(None)


# integers below 2**53 are exact in float64, and so is every partial sum
# of a BLAS product whose total stays below it
_FLOAT_EXACT = 2**53


def _is_sparse(A: np.ndarray) -> bool:
    # Koszul differentials and signed permutations are mostly zeros
    return A.size >= 4096 and np.count_nonzero(A) * 10 < A.size


def _float_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)


def _scaled_ints(M: np.ndarray) -> tuple[list[int], int]:
    """Integer entries of ``den * M`` (flattened) and the common denominator."""
    flat = M.ravel().tolist()
    den = lcm(*{x.denominator for x in flat})
    if den == 1:
        return [x.numerator for x in flat], 1
    return [x.numerator * (den // x.denominator) for x in flat], den


def _rational_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # Fraction arithmetic inside a matmul is very slow, so clear denominators
    # and multiply integers, in int64 when no partial sum can overflow
    a, da = _scaled_ints(A)
    b, db = _scaled_ints(B)
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    bound = ma * mb * A.shape[1]
    if bound < 2**63 and _is_sparse(A):
        Ai = np.array(a, dtype=np.int64).reshape(A.shape)
        P = np.asarray(sparse.csr_matrix(Ai) @ np.array(b, dtype=np.int64).reshape(B.shape))
    elif bound < _FLOAT_EXACT:
        P = _float_matmul(np.array(a, dtype=np.int64).reshape(A.shape), np.array(b, dtype=np.int64).reshape(B.shape))
    elif bound < 2**62:
        P = np.array(a, dtype=np.int64).reshape(A.shape) @ np.array(b, dtype=np.int64).reshape(B.shape)
    else:
        P = np.array(a, dtype=object).reshape(A.shape).dot(np.array(b, dtype=object).reshape(B.shape))
    den = da * db
    out = np.empty(P.shape, dtype=object)
    flat = out.ravel()
    if den == 1:
        flat[:] = [Fraction(int(v)) for v in P.ravel().tolist()]
    else:
        flat[:] = [Fraction(int(v), den) for v in P.ravel().tolist()]
    return out


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


def parse_exact(text: str, allow_fraction: bool = True):
    """Parse ``"3"``, ``"-2"``, ``"3/2"`` exactly; decimals are rejected."""
    t = text.strip()
    if "/" in t:
        if not allow_fraction:
            raise FieldError(f"{text!r}: fractions not allowed here")
        num, _, den = t.partition("/")
        try:
            n, d = int(num), int(den)
        except ValueError:
            raise FieldError(f"{text!r} is not an exact scalar") from None
        if d == 0:
            raise FieldError(f"{text!r} has zero denominator")
        return Fraction(n, d)
    try:
        return int(t)
    except ValueError:
        raise FieldError(f"{text!r} is not an exact scalar") from None
