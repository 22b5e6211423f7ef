"""Point counts of Kummer and K3 fibrations over F_p, truncated hypergeometric
series, and the differential operators that annihilate them."""

from .counting import (
    CSV_HEADER,
    CountReport,
    count_brute_force,
    count_euler,
    count_exact,
    count_formula,
    report,
    sweep,
)
from .fpcore import (
    DomainError,
    FpElem,
    KummerlabError,
    PrimeContext,
    binomial,
    euler_pow,
    get_context,
    legendre_symbol,
    multinomial,
    pochhammer_half,
    power_sum,
)
from .models import (
    AffinePoint,
    DenominatorVanishes,
    ModelId,
    ModelInstance,
    UndefinedModuli,
    cover_to_S,
    cover_to_Y,
    j4_to_j6,
    j6_param_swap,
    moduli_forward,
    psi_base,
)
from .pfops import (
    AppellOperator,
    BiPoly,
    GaussOperator,
    apply_appell,
    apply_gauss,
    is_zero,
    poly_from_countX,
    poly_from_countZ,
)
from .series import (
    BadParams,
    DomainViolation,
    HpgParamsAppell,
    HpgParamsGauss,
    NonConvergent,
    clausen_residual,
    f2_float,
    gauss2f1_float,
    identity_sides,
    kummer_count_formula,
    trunc_2f1,
    trunc_appell_f2,
)

__version__ = "0.1.0"
