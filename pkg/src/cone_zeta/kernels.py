"""Backend selection for the Bessel kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module with the identical interface.  Setting
``CONE_ZETA_PURE=1`` forces the fallback.
"""

import os

if os.environ.get("CONE_ZETA_PURE", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

AUTO = _impl.AUTO
SERIES = _impl.SERIES
RECURRENCE = _impl.RECURRENCE
ASYMPTOTIC = _impl.ASYMPTOTIC
CLOSED = _impl.CLOSED
QUADRATURE = _impl.QUADRATURE
Z_SERIES = _impl.Z_SERIES
Z_ASYMPTOTIC = _impl.Z_ASYMPTOTIC
Z_K0_SERIES = _impl.Z_K0_SERIES

gamma = _impl.gamma
jnorm = _impl.jnorm
wfun = _impl.wfun
inorm_scaled = _impl.inorm_scaled
k0_scaled = _impl.k0_scaled
wi_scaled = _impl.wi_scaled
real_entries = _impl.real_entries
imag_entries = _impl.imag_entries

ROUTE_NAMES = {
    SERIES: "series",
    RECURRENCE: "recurrence",
    ASYMPTOTIC: "asymptotic",
    CLOSED: "closed-half-integer",
    QUADRATURE: "quadrature",
}
