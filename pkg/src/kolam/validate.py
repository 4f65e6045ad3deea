"""Machine checks for the five drawing rules, plus symmetry detection."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import JOINT_TOL, RenderParams, clearance, enclosure_check, smooth_path
from .grid import Element, SymmetryGroup, site_permutation
from .trace import GateConfig, trace

RULE_NAMES = ("obstacle", "continuity", "completeness", "smoothness", "diagonal")


@dataclass(frozen=True)
class RuleVerdict:
    number: int
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class RuleReport:
    clearance: float
    required_clearance: float
    loop_count: int
    all_enclosed: bool
    symmetry: SymmetryGroup
    required_symmetry: SymmetryGroup | None
    max_tangent_mismatch: float
    max_joint_gap: float
    non_diagonal_segments: int

    @property
    def rules(self) -> tuple[RuleVerdict, ...]:
        sym_ok = (
            self.symmetry is not SymmetryGroup.NONE
            if self.required_symmetry is None
            else self.symmetry.contains(self.required_symmetry)
        )
        return (
            RuleVerdict(1, "obstacle", self.clearance >= self.required_clearance,
                        f"clearance={self.clearance:.12f} required={self.required_clearance:.12f}"),
            RuleVerdict(2, "continuity", self.loop_count == 1, f"loops={self.loop_count}"),
            RuleVerdict(3, "completeness", self.all_enclosed and sym_ok,
                        f"enclosed={'yes' if self.all_enclosed else 'no'} symmetry={self.symmetry.value}"
                        + ("" if self.required_symmetry is None
                           else f" required={self.required_symmetry.value}")),
            RuleVerdict(4, "smoothness", self.max_tangent_mismatch < JOINT_TOL and self.max_joint_gap < JOINT_TOL,
                        f"max_tangent_mismatch={self.max_tangent_mismatch:.3e}"),
            RuleVerdict(5, "diagonal", self.non_diagonal_segments == 0,
                        f"non_diagonal_segments={self.non_diagonal_segments}"),
        )

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rules)

    def format_text(self) -> str:
        lines = [
            f"rule-{r.number} {'PASS' if r.passed else 'FAIL'} {r.name} {r.detail}" for r in self.rules
        ]
        lines.append(f"overall {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def format_machine(self) -> str:
        pairs = [
            ("clearance", f"{self.clearance:.12f}"),
            ("required_clearance", f"{self.required_clearance:.12f}"),
            ("loop_count", str(self.loop_count)),
            ("all_enclosed", str(self.all_enclosed).lower()),
            ("symmetry", self.symmetry.value),
            ("max_tangent_mismatch", f"{self.max_tangent_mismatch:.6e}"),
            ("non_diagonal_segments", str(self.non_diagonal_segments)),
        ]
        pairs += [(f"rule{r.number}", "pass" if r.passed else "fail") for r in self.rules]
        pairs.append(("overall", "pass" if self.passed else "fail"))
        return "".join(f"{k}={v}\n" for k, v in pairs)


def _fixed_by(config: GateConfig, element: Element) -> bool:
    perm = site_permutation(config.grid, element)
    states = config.states
    return all(states[perm[k]] == states[k] for k in range(len(states)))


def detect_symmetry(config: GateConfig) -> SymmetryGroup:
    """Largest group in none < {h, v, rot180} < d2 < d4 fixing the gate states."""
    grid = config.grid
    fixed = {e for e in Element if (grid.is_square or not e.needs_square) and _fixed_by(config, e)}
    if grid.is_square and fixed == set(Element):
        return SymmetryGroup.D4
    h, v, r = Element.H_MIRROR in fixed, Element.V_MIRROR in fixed, Element.ROT180 in fixed
    if h and v:
        return SymmetryGroup.D2
    if h:
        return SymmetryGroup.H_MIRROR
    if v:
        return SymmetryGroup.V_MIRROR
    if r:
        return SymmetryGroup.ROT180
    return SymmetryGroup.NONE


def validate(config: GateConfig, params: RenderParams | None = None,
             required_symmetry: SymmetryGroup | None = None) -> RuleReport:
    """Check all five rules on the traced geometry.

    ``required_symmetry=None`` demands some non-trivial symmetry; pass a
    group to require at least that group instead (``NONE`` waives it).
    """
    params = params or RenderParams()
    loops = trace(config)
    paths = smooth_path(loops, config.grid)
    enclosed = enclosure_check(config, paths)
    non_diag = sum(1 for p in paths for s in p.segments if not s.is_diagonal)
    return RuleReport(
        clearance=clearance(paths, config.grid),
        required_clearance=params.dot_radius + params.stroke_width / 2,
        loop_count=len(loops),
        all_enclosed=all(enclosed.values()),
        symmetry=detect_symmetry(config),
        required_symmetry=required_symmetry,
        max_tangent_mismatch=max((p.max_tangent_mismatch() for p in paths), default=0.0),
        max_joint_gap=max((p.max_gap() for p in paths), default=0.0),
        non_diagonal_segments=non_diag,
    )
