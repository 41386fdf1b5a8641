"""Mamdani fuzzy inference: membership functions, variables, rules, defuzzification.

The engine uses the classical operator set (AND = min, OR = max,
NOT = complement, min implication, max aggregation) and defuzzifies by the
centroid of the aggregated output curve sampled at evenly spaced points.
A constructed :class:`MamdaniFis` is immutable and safe to evaluate from any
number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, NamedTuple, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigurationError

# Upper bound on elements in one aggregation buffer; keeps batch evaluation
# memory-bounded regardless of input size.
_CHUNK_ELEMENTS = 1 << 22


def _eval_shape(x):
    """Normalize input to a 1-d float array, remembering scalar-ness."""
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return arr, scalar


def _group_rows(rows: np.ndarray):
    """Group identical rows of a 2-d float array.

    Returns (unique_rows, inverse) such that unique_rows[inverse] rebuilds the
    input, or None when the row space is too wide to encode. Column-wise codes
    keep the sort on primitive dtypes, which is much faster than sorting
    structured rows.
    """
    n, width = rows.shape
    codes = None
    capacity = 1
    for j in range(width):
        uniq, inverse = np.unique(rows[:, j], return_inverse=True)
        if codes is None:
            codes = inverse.astype(np.int64)
            capacity = uniq.size
        else:
            if capacity > (1 << 62) // max(uniq.size, 1):
                return None
            capacity *= uniq.size
            codes = codes * np.int64(uniq.size) + inverse
    _, first_index, inverse = np.unique(codes, return_index=True, return_inverse=True)
    return rows[first_index], inverse


class GaussianMF:
    """Bell curve exp(-(x - center)^2 / (2 sigma^2)); peaks at 1 on its center."""

    def __init__(self, center: float, sigma: float):
        center = float(center)
        sigma = float(sigma)
        if not math.isfinite(center):
            raise ConfigurationError(f"gaussian center must be finite, got {center}")
        if not sigma > 0:
            raise ConfigurationError(f"gaussian sigma must be > 0, got {sigma}")
        self.center = center
        self.sigma = sigma

    def __call__(self, x):
        arr, scalar = _eval_shape(x)
        z = (arr - self.center) / self.sigma
        out = np.exp(-0.5 * z * z)
        return float(out[0]) if scalar else out

    def to_dict(self) -> dict:
        return {"type": "gaussian", "center": self.center, "sigma": self.sigma}

    def __eq__(self, other):
        return (
            isinstance(other, GaussianMF)
            and self.center == other.center
            and self.sigma == other.sigma
        )

    def __repr__(self):
        return f"GaussianMF(center={self.center!r}, sigma={self.sigma!r})"


class TriangularMF:
    """Piecewise-linear triangle through (a, 0), (b, 1), (c, 0).

    Degenerate shoulders are allowed: with a == b the left leg collapses and
    the function evaluates to 1 at the flat endpoint, likewise for b == c.
    """

    def __init__(self, a: float, b: float, c: float):
        a, b, c = float(a), float(b), float(c)
        if not (a <= b <= c):
            raise ConfigurationError(
                f"triangular vertices must satisfy a <= b <= c, got ({a}, {b}, {c})"
            )
        self.a = a
        self.b = b
        self.c = c

    def __call__(self, x):
        arr, scalar = _eval_shape(x)
        out = np.zeros_like(arr)
        if self.b > self.a:
            m = (arr > self.a) & (arr < self.b)
            out[m] = (arr[m] - self.a) / (self.b - self.a)
        if self.c > self.b:
            m = (arr > self.b) & (arr < self.c)
            out[m] = (self.c - arr[m]) / (self.c - self.b)
        out[arr == self.b] = 1.0
        return float(out[0]) if scalar else out

    def to_dict(self) -> dict:
        return {"type": "triangular", "a": self.a, "b": self.b, "c": self.c}

    def __eq__(self, other):
        return (
            isinstance(other, TriangularMF)
            and (self.a, self.b, self.c) == (other.a, other.b, other.c)
        )

    def __repr__(self):
        return f"TriangularMF(a={self.a!r}, b={self.b!r}, c={self.c!r})"


MembershipFunction = Union[GaussianMF, TriangularMF]


def membership_from_dict(data: Mapping) -> MembershipFunction:
    """Rebuild a membership function from its ``to_dict`` form."""
    kind = data.get("type")
    try:
        if kind == "gaussian":
            return GaussianMF(data["center"], data["sigma"])
        if kind == "triangular":
            return TriangularMF(data["a"], data["b"], data["c"])
    except KeyError as exc:
        raise ConfigurationError(f"membership function missing field {exc}") from exc
    raise ConfigurationError(f"unknown membership function type {kind!r}")


@dataclass
class FuzzyVariable:
    """A named linguistic variable: a universe interval and its term set.

    Treat instances as immutable once handed to a :class:`MamdaniFis`.
    """

    name: str
    universe: Tuple[float, float]
    terms: Dict[str, MembershipFunction]

    def __post_init__(self):
        lo, hi = (float(self.universe[0]), float(self.universe[1]))
        if not lo < hi:
            raise ConfigurationError(
                f"variable {self.name!r} universe must satisfy lo < hi, got ({lo}, {hi})"
            )
        self.universe = (lo, hi)
        if not self.terms:
            raise ConfigurationError(f"variable {self.name!r} declares no terms")

    def clamp(self, x):
        """Pull crisp values onto the universe before fuzzification."""
        lo, hi = self.universe
        return np.clip(x, lo, hi)

    def membership(self, term: str, x):
        try:
            mf = self.terms[term]
        except KeyError:
            raise ConfigurationError(
                f"variable {self.name!r} has no term {term!r}"
            ) from None
        return mf(x)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "universe": list(self.universe),
            "terms": {name: mf.to_dict() for name, mf in self.terms.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FuzzyVariable":
        try:
            terms = {
                name: membership_from_dict(mf) for name, mf in data["terms"].items()
            }
            return cls(data["name"], tuple(data["universe"]), terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed variable definition: {exc}") from exc


@dataclass(frozen=True)
class Clause:
    """One antecedent condition: ``<variable> is [not] <term>``."""

    variable: str
    term: str
    negated: bool = False

    def to_dict(self) -> dict:
        return {"variable": self.variable, "term": self.term, "negated": self.negated}


@dataclass(frozen=True)
class FuzzyRule:
    """IF-THEN rule with one connective across its antecedent clauses."""

    antecedent: Tuple[Clause, ...]
    consequent: str
    connective: str = "and"

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))
        if not self.antecedent:
            raise ConfigurationError("rule antecedent must not be empty")
        if self.connective not in ("and", "or"):
            raise ConfigurationError(
                f"rule connective must be 'and' or 'or', got {self.connective!r}"
            )

    def to_dict(self) -> dict:
        return {
            "antecedent": [clause.to_dict() for clause in self.antecedent],
            "consequent": self.consequent,
            "connective": self.connective,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FuzzyRule":
        try:
            clauses = tuple(
                Clause(c["variable"], c["term"], bool(c.get("negated", False)))
                for c in data["antecedent"]
            )
            return cls(clauses, data["consequent"], data.get("connective", "and"))
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"malformed rule definition: {exc}") from exc


class CrispOutput(NamedTuple):
    """Defuzzified value plus a flag for zero aggregate mass."""

    value: float
    indeterminate: bool


def defuzz_centroid(samples, heights) -> CrispOutput:
    """Area centroid of a membership curve sampled at evenly spaced points.

    An all-zero curve carries no information; it is reported as indeterminate
    at the midpoint of the sampled interval.
    """
    y = np.asarray(samples, dtype=float)
    a = np.asarray(heights, dtype=float)
    if y.shape != a.shape or y.ndim != 1 or y.size < 2:
        raise ConfigurationError("samples and heights must be matching 1-d arrays")
    mass = float(a.sum())
    if mass == 0.0:
        return CrispOutput(float(0.5 * (y[0] + y[-1])), True)
    return CrispOutput(float((y * a).sum() / mass), False)


class MamdaniFis:
    """Immutable Mamdani system with a single output variable.

    Evaluation fuzzifies clamped crisp inputs, folds each rule's antecedent
    with its connective (a negated clause contributes the complement),
    implication-clips the consequent at the rule activation, aggregates rule
    outputs pointwise by max, and returns the sampled-curve centroid.
    """

    def __init__(
        self,
        inputs: Sequence[FuzzyVariable],
        output: FuzzyVariable,
        rules: Sequence[FuzzyRule],
        resolution: int = 1001,
    ):
        inputs = tuple(inputs)
        rules = tuple(rules)
        resolution = int(resolution)
        if resolution < 2:
            raise ConfigurationError(f"resolution must be >= 2, got {resolution}")
        if not rules:
            raise ConfigurationError("rule list must not be empty")
        names = [v.name for v in inputs]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate input variable names in {names}")
        self.inputs = inputs
        self.output = output
        self.rules = rules
        self.resolution = resolution
        self._by_name = {v.name: v for v in inputs}
        for rule in rules:
            for clause in rule.antecedent:
                var = self._by_name.get(clause.variable)
                if var is None:
                    raise ConfigurationError(
                        f"rule references unknown variable {clause.variable!r}"
                    )
                if clause.term not in var.terms:
                    raise ConfigurationError(
                        f"variable {clause.variable!r} has no term {clause.term!r}"
                    )
            if rule.consequent not in output.terms:
                raise ConfigurationError(
                    f"output variable {output.name!r} has no term {rule.consequent!r}"
                )
        lo, hi = output.universe
        self._samples = np.linspace(lo, hi, resolution)
        self._midpoint = 0.5 * (lo + hi)
        # One sampled consequent curve per rule, clipped during aggregation.
        self._consequents = np.stack(
            [np.asarray(output.terms[r.consequent](self._samples)) for r in rules]
        )

    @property
    def output_samples(self) -> np.ndarray:
        """The evenly spaced output-universe sample points (a copy)."""
        return self._samples.copy()

    def rule_activation(self, rule: FuzzyRule, values: Mapping[str, float]) -> float:
        """Antecedent truth degree of one rule for crisp input values."""
        degrees = []
        for clause in rule.antecedent:
            var = self._by_name.get(clause.variable)
            if var is None:
                raise ConfigurationError(
                    f"rule references unknown variable {clause.variable!r}"
                )
            if clause.variable not in values:
                raise ConfigurationError(
                    f"missing input value for variable {clause.variable!r}"
                )
            x = var.clamp(float(values[clause.variable]))
            degree = var.membership(clause.term, x)
            degrees.append(1.0 - degree if clause.negated else degree)
        return min(degrees) if rule.connective == "and" else max(degrees)

    def evaluate(self, values: Mapping[str, float]) -> CrispOutput:
        """Crisp output for one complete set of crisp inputs."""
        batch = {}
        for var in self.inputs:
            if var.name not in values:
                raise ConfigurationError(f"missing input value for variable {var.name!r}")
            batch[var.name] = np.asarray([float(values[var.name])])
        crisp, indeterminate = self.evaluate_batch(batch)
        return CrispOutput(float(crisp[0]), bool(indeterminate[0]))

    def evaluate_batch(self, values: Mapping[str, np.ndarray]):
        """Vectorized :meth:`evaluate` over same-shape arrays of crisp inputs.

        Returns ``(crisp, indeterminate)`` arrays of the common input shape.
        Identical input elements always produce identical outputs, so large
        batches are deduplicated before the aggregation step.
        """
        arrays = {}
        shape = None
        for var in self.inputs:
            if var.name not in values:
                raise ConfigurationError(f"missing input value for variable {var.name!r}")
            arr = np.asarray(values[var.name], dtype=float)
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise ConfigurationError(
                    f"input arrays must share one shape, got {arr.shape} vs {shape}"
                )
            arrays[var.name] = np.asarray(var.clamp(arr)).ravel()
        activations = np.empty((arrays[self.inputs[0].name].size, len(self.rules)))
        for j, rule in enumerate(self.rules):
            activations[:, j] = self._activation_array(rule, arrays)
        crisp, indeterminate = self._centroids(activations)
        return crisp.reshape(shape), indeterminate.reshape(shape)

    def aggregate(self, values: Mapping[str, float]) -> np.ndarray:
        """Aggregated output curve A(y) for crisp inputs (diagnostic helper)."""
        acts = [self.rule_activation(rule, values) for rule in self.rules]
        return self.aggregate_activations(acts)

    def aggregate_activations(self, activations: Sequence[float]) -> np.ndarray:
        """Aggregated curve max_r min(w_r, mu_r(y)) for given rule activations."""
        w = np.asarray(activations, dtype=float)
        if w.shape != (len(self.rules),):
            raise ConfigurationError(
                f"expected {len(self.rules)} activations, got shape {w.shape}"
            )
        agg = np.minimum(w[0], self._consequents[0])
        for j in range(1, len(self.rules)):
            np.maximum(agg, np.minimum(w[j], self._consequents[j]), out=agg)
        return agg

    def _activation_array(self, rule: FuzzyRule, arrays: Mapping[str, np.ndarray]):
        folded = None
        for clause in rule.antecedent:
            degree = self._by_name[clause.variable].terms[clause.term](
                arrays[clause.variable]
            )
            if clause.negated:
                degree = 1.0 - degree
            if folded is None:
                folded = degree
            elif rule.connective == "and":
                folded = np.minimum(folded, degree)
            else:
                folded = np.maximum(folded, degree)
        return folded

    def _centroids(self, activations: np.ndarray):
        n = activations.shape[0]
        if n > 8:
            # Pixel batches repeat the same activation vectors heavily; solve
            # each distinct vector once. Grouping is by exact float equality,
            # so it never merges activations that defuzzify differently.
            grouped = _group_rows(activations)
            if grouped is not None and grouped[0].shape[0] < n:
                uniq, inverse = grouped
                crisp, indeterminate = self._centroids_direct(uniq)
                return crisp[inverse], indeterminate[inverse]
        return self._centroids_direct(activations)

    def _centroids_direct(self, activations: np.ndarray):
        n = activations.shape[0]
        crisp = np.empty(n)
        indeterminate = np.empty(n, dtype=bool)
        step = max(1, _CHUNK_ELEMENTS // self.resolution)
        y = self._samples
        for start in range(0, n, step):
            w = activations[start : start + step]
            agg = np.minimum(w[:, 0, None], self._consequents[0])
            for j in range(1, len(self.rules)):
                np.maximum(agg, np.minimum(w[:, j, None], self._consequents[j]), out=agg)
            mass = agg.sum(axis=1)
            moment = (agg * y).sum(axis=1)
            zero = mass == 0.0
            stop = start + w.shape[0]
            indeterminate[start:stop] = zero
            crisp[start:stop] = np.where(
                zero, self._midpoint, moment / np.where(zero, 1.0, mass)
            )
        return crisp, indeterminate

    def to_dict(self) -> dict:
        return {
            "inputs": [v.to_dict() for v in self.inputs],
            "output": self.output.to_dict(),
            "rules": [r.to_dict() for r in self.rules],
            "resolution": self.resolution,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MamdaniFis":
        try:
            inputs = [FuzzyVariable.from_dict(v) for v in data["inputs"]]
            output = FuzzyVariable.from_dict(data["output"])
            rules = [FuzzyRule.from_dict(r) for r in data["rules"]]
            resolution = int(data["resolution"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed inference system: {exc}") from exc
        return cls(inputs, output, rules, resolution)

    def __eq__(self, other):
        return (
            isinstance(other, MamdaniFis)
            and self.inputs == other.inputs
            and self.output == other.output
            and self.rules == other.rules
            and self.resolution == other.resolution
        )

    def __repr__(self):
        names = ", ".join(v.name for v in self.inputs)
        return (
            f"MamdaniFis(inputs=[{names}], output={self.output.name!r}, "
            f"rules={len(self.rules)}, resolution={self.resolution})"
        )
