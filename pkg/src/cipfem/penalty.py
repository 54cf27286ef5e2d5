"""Interior-penalty parameter sets.

The jump penalty weights gamma_j multiply the order-j normal-derivative jump
terms; gamma identically zero recovers the plain FEM.  The dispersion-optimal
values for p = 1, 2, 3 were derived by requiring the 1D discrete wavenumber
to coincide with the exact one; they are functions of t = kh alone, real, and
tend to small negative constants as t -> 0 (-1/12 for p = 1).

Their closed forms are ratios whose numerator and denominator both vanish to
high order at t = 0, so for small t both are evaluated from frozen Taylor
coefficients (exact-rational expansions truncated far below double-precision
relevance on the series interval).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

# Taylor coefficients of the optimal-gamma numerators and denominators in
# powers of t^2; the shared leading power of t cancels in each ratio.
_G11 = (
    np.array([-0.25, 0.03333333333333333, -0.001240079365079365, 2.3148148148148147e-05, -2.6304713804713803e-07, 2.0188512252004315e-09, -1.1183976957786481e-11, 4.685762090575868e-14, -1.5372587911187496e-16, 4.0569368749574614e-19, -8.800087138184805e-22, 1.5968599935167696e-24, -2.4599169278023786e-27, 3.2572693112969424e-30, -3.747185284286777e-33, 3.7800678096416166e-36, -3.371028213923442e-39, 2.6767484870563948e-42, -1.9046095004055117e-45, 1.221346995089611e-48, -7.094835674004046e-52]),
    np.array([3.0, -0.5, 0.0375, -0.0016865079365079366, 5.1256613756613754e-05, -1.1273448773448773e-06, 1.8792522512760608e-08, -2.456651348847116e-10, 2.58597838254701e-12, -2.2389487282413265e-14, 1.622427775118679e-16, -9.984172709116565e-19, 5.282631299176662e-21, -2.428796026765365e-23, 9.793532393352188e-26, -3.491455401138286e-28, 1.108398540237452e-30, -3.1533386636866005e-33, 8.085483753130809e-36, -1.8781611505581582e-38, 3.970742390189089e-41]),
)
_G21 = (
    np.array([-0.003125, 0.00010540674603174604, -1.4596767526455026e-06, 1.1987825301627385e-08, -6.78051006865801e-11, 2.8536840244352027e-13, -9.356938373862957e-16, 2.464998923065013e-18, -5.337290854600419e-21, 9.67000119450424e-24, -1.4877385445257993e-26, 1.96792615246918e-29, -2.2619901335816324e-32, 2.2802337506979292e-35, -2.032294344343212e-38, 1.6129321203402784e-41, -1.1471779152004186e-44, 7.353704620858951e-48, -4.2704440365454786e-51, 2.2571057284156948e-54]),
    np.array([0.1875, -0.0234375, 0.001318359375, -4.485599578373016e-05, 1.0475279792906747e-06, -1.8041371267079274e-08, 2.4013259232200453e-10, -2.5531952448657684e-12, 2.222977576356619e-14, -1.6159168276881636e-16, 9.961633326406952e-19, -5.27592295276735e-21, 2.427061086970617e-23, -9.789597275249256e-26, 3.4906662711441734e-28, -1.1082576240057816e-30, 3.153113157511244e-33, -8.085158503765892e-36, 1.8781186528145694e-38, -3.9706918511154394e-41]),
)
_G22 = (
    np.array([-0.020833333333333332, 0.0033482142857142855, -0.0001689608134920635, 4.5406946448613114e-06, -7.842400900087842e-08, 9.606693428598656e-10, -8.862300358740266e-12, 6.408231984465211e-14, -3.7376335961446876e-16, 1.7971305460112075e-18, -7.24785242338372e-21, 2.4869995230288268e-23, -7.348497971254296e-26, 1.8891174704334033e-28, -4.263389445706545e-31, 8.513595715513519e-34, -1.5148512032415017e-36, 2.416778201185529e-39, -3.476548141005586e-42, 4.532136259213087e-45]),
    np.array([15.0, -2.8125, 0.2421875, -0.01278444320436508, 0.0004664829799107143, -1.2590702822026065e-05, 2.628375448972295e-07, -4.382043342897556e-09, 5.978890895194767e-11, -6.806255751743134e-13, 6.567001170000169e-15, -5.4409722358702865e-17, 3.9142138397655557e-19, -2.468317144396611e-21, 1.3757396339308107e-23, -6.826599599529039e-26, 3.0352933093468007e-28, -1.216244956635803e-30, 4.414784373999136e-33, -1.4584615596209698e-35]),
)
_G31 = (
    np.array([0.018518518518518517, -0.0019351361943954536, 5.075990158294685e-05, -6.87606108527716e-07, 5.887634616142847e-09, -3.511968156638354e-11, 1.550028396594164e-13, -5.280230277989595e-16, 1.4328290269521513e-18, -3.174039958080153e-21, 5.853570544038257e-24, -9.13239000353718e-27, 1.2215452667206023e-29, -1.416821062928865e-32, 1.4388803766086178e-35, -1.2903520084748314e-38, 1.0294032049930687e-41, -7.35371163777136e-45, 4.731653990119542e-48, -2.75667897831267e-51]),
    np.array([-2.2222222222222223, 0.39094650205761317, -0.028235025148605396, 0.0011523924037260419, -3.065097820442252e-05, 5.789265767286219e-07, -8.225146979685375e-09, 9.157666313622412e-11, -8.236537347249905e-13, 6.125820412443663e-15, -3.837627412036258e-17, 2.0555925881189955e-19, -9.531466928471227e-22, 3.8659229027242295e-24, -1.3838272911486252e-26, 4.4054646852971913e-29, -1.2557767385709097e-31, 3.224294002562053e-34, -7.496674079663593e-37, 1.585952068106796e-39]),
)
_G32 = (
    np.array([-0.001763668430335097, 0.000173100790384741, -5.297713345267072e-06, 8.85332740474838e-08, -9.749466157788509e-10, 7.764847395163148e-12, -4.727715080442528e-14, 2.283798302557472e-16, -8.991626860553394e-19, 2.9454683816489557e-21, -8.161333485091385e-24, 1.9388418324190202e-26, -3.99433811485082e-29, 7.206078257243345e-32, -1.148080558077175e-34, 1.6273458907847083e-37, -2.0656928683520057e-40, 2.3619253703258553e-43, -2.4454454552728584e-46]),
    np.array([8.88888888888889, -1.316872427983539, 0.08809632677945435, -0.003564432767298184, 9.879958601923975e-05, -2.0166098495270187e-06, 3.180335281733899e-08, -4.011475325465115e-10, 4.153562451212102e-12, -3.6028689354017154e-14, 2.6611298324657535e-16, -1.6961998586808623e-18, 9.434680568398717e-21, -4.6230271560992193e-23, 2.0119055183533121e-25, -7.831468334133927e-28, 2.743677879299992e-30, -8.699036414157999e-33, 2.5083992865534163e-35]),
)
_G33 = (
    np.array([-0.1111111111111111, 0.02880658436213992, -0.002763228997796899, 0.00013029170246057917, -3.750453688393648e-06, 7.427420746728027e-08, -1.088169536288894e-09, 1.237577248148681e-11, -1.130546507340276e-13, 8.509075406668708e-16, -5.381364869871743e-18, 2.9048832102130264e-20, -1.3556906488441318e-22, 5.528905669578807e-25, -1.9884598742230546e-27, 6.356267341525614e-30, -1.8183252826888306e-32, 4.683297561877401e-35, -1.0918969585892446e-37]),
    np.array([15120.0, -3360.0, 346.8888888888889, -22.194787379972563, 0.9913827922572779, -0.03304337127306187, 0.0008583242245098641, -1.792538127905867e-05, 3.0820305890547594e-07, -4.445581991231575e-09, 5.4627690457507516e-11, -5.792263313606392e-13, 5.357274462572985e-15, -4.362561225218802e-17, 3.1531826339688003e-19, -2.037230862758144e-21, 1.1839421135550676e-23, -6.223531530810569e-26, 2.97389263878921e-28]),
)

_SERIES = {(1, 1): _G11, (2, 1): _G21, (2, 2): _G22,
           (3, 1): _G31, (3, 2): _G32, (3, 3): _G33}

# below this t the closed forms lose digits to cancellation; use the series
_SERIES_CUT = 0.3


def _values_series(p: int, t: float) -> list[float]:
    u = t * t
    out = []
    for j in range(1, p + 1):
        num, den = _SERIES[(p, j)]
        out.append(npoly.polyval(u, num) / npoly.polyval(u, den))
    return out


def _values_direct(p: int, t: float) -> list[float]:
    c, s = np.cos, np.sin
    if p == 1:
        return [(t**2 * (c(t) + 2) + 6 * c(t) - 6) / (12 * (1 - c(t)) ** 2)]
    if p == 2:
        g1 = ((t**2 * (2 * c(t / 2) + 1) + 12 * c(t / 2) ** 2 - 12)
              / (768 * (s(t / 4) ** 6 - s(t / 4) ** 8)))
        g2 = ((t**2 * (8 * s(t / 4) ** 6 + 12 * s(t / 4) ** 4 - 30 * s(t / 4) ** 2 + 15)
               - 160 * s(t / 4) ** 6 + 400 * s(t / 4) ** 4 - 240 * s(t / 4) ** 2)
              / (61440 * (s(t / 4) ** 10 - 2 * s(t / 4) ** 8 + s(t / 4) ** 6)))
        return [g1, g2]
    g1 = ((2 * t**2 * (36 * c(t / 3) + 9 * c(2 * t / 3) + 2 * c(t) + 13) + 240 * (c(t) - 1))
          / (480 * (2 * c(t / 3) + 1) ** 2 * (4 * c(t / 3) - 1) * (c(t / 3) - 1) ** 3))
    g2 = ((2 * t**2 * (c(t / 3) + 28 * c(2 * t / 3) + c(4 * t / 3) - c(t) + 31)
           - 120 * s(t / 3) ** 2 * (2 * c(t / 3) + 1) ** 2)
          / (34560 * (2 * c(t / 3) + 1) ** 3 * (c(t / 3) - 1) ** 4))
    g3 = ((36 * t**2 * (c(2 * t) + 201 * c(t / 3) + 93 * c(2 * t / 3) + 24 * c(4 * t / 3)
                        - 3 * c(5 * t / 3) + 38 * c(t) + 66)
           + 504 * (c(t) - 1) * (36 * c(t / 3) + 9 * c(2 * t / 3) + 2 * c(t) + 13))
          / (6531840 * (c(t / 3) - 1) ** 4 * (2 * c(t / 3) + 1) ** 5))
    return [g1, g2, g3]


@dataclass(frozen=True)
class PenaltySet:
    """Weights gamma_1..gamma_p of the normal-derivative jump penalties.

    ``provenance`` is one of "zero" (plain FEM), "constant", or "optimal"
    (dispersion-eliminating values at t = kh, in which case ``t`` is set).
    ``per_edge_override`` optionally maps an Edge to its own weight tuple.
    """

    p: int
    values: tuple[complex, ...]
    provenance: str
    t: float | None = None
    per_edge_override: dict | None = None

    def __post_init__(self):
        if len(self.values) != self.p:
            raise ValueError(f"expected {self.p} penalty values, got {len(self.values)}")
        for v in self.values:
            if complex(v).imag < 0:
                raise ValueError(f"penalty weights need nonnegative imaginary part, got {v}")
        if self.per_edge_override:
            for vals in self.per_edge_override.values():
                if len(vals) != self.p:
                    raise ValueError("per-edge override length must equal p")
                if any(complex(v).imag < 0 for v in vals):
                    raise ValueError("per-edge weights need nonnegative imaginary part")

    @property
    def is_zero(self) -> bool:
        return (not self.per_edge_override) and all(v == 0 for v in self.values)

    @property
    def is_real(self) -> bool:
        vals = list(self.values)
        if self.per_edge_override:
            for v in self.per_edge_override.values():
                vals.extend(v)
        return all(complex(v).imag == 0 for v in vals)


def gamma_zero(p: int) -> PenaltySet:
    """The all-zero set: CIP assembly degenerates to the plain FEM."""
    return PenaltySet(p, (0.0,) * p, "zero")


def gamma_constant(p: int, values) -> PenaltySet:
    """Uniform user-chosen weights, one per jump order."""
    vals = tuple(complex(v) for v in values)
    if len(vals) != p:
        raise ValueError(f"expected {p} penalty values, got {len(vals)}")
    vals = tuple(v.real if v.imag == 0 else v for v in vals)
    if all(v == 0 for v in vals):
        return gamma_zero(p)
    return PenaltySet(p, vals, "constant")


def gamma_optimal(p: int, t: float) -> PenaltySet:
    """Dispersion-eliminating weights at t = kh for p in {1, 2, 3}."""
    if p not in (1, 2, 3):
        raise ValueError(f"optimal penalty weights exist for p in {{1,2,3}}, got {p}")
    t = float(t)
    if not np.isfinite(t) or t <= 0.0 or t >= np.pi:
        raise ValueError(f"t = kh must lie in (0, pi), got {t!r}")
    vals = _values_series(p, t) if t < _SERIES_CUT else _values_direct(p, t)
    if not all(np.isfinite(v) for v in vals):
        raise ValueError(f"penalty formula evaluated non-finite at t={t}")
    return PenaltySet(p, tuple(float(v) for v in vals), "optimal", t=t)
