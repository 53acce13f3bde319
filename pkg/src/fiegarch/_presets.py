"""Named example models M1..M6 used by the experiment harness and tests."""

from .coeffs import FiegarchSpec
from .innovations import GED, InnovationDist

PRESETS: dict[str, FiegarchSpec] = {
    "M1": FiegarchSpec(d=0.4495, omega=-6.5769, theta=-0.1245, gamma=0.3662,
                       alpha=(-1.1190, -0.7619), beta=(-0.6195,)),
    "M2": FiegarchSpec(d=0.2391, omega=-6.6278, theta=-0.0456, gamma=0.3963,
                       beta=(0.2289, 0.1941, 0.4737, -0.4441)),
    "M3": FiegarchSpec(d=0.4312, omega=-6.6829, theta=-0.1095, gamma=0.3376,
                       beta=(0.5454,)),
    "M4": FiegarchSpec(d=0.3578, omega=-7.2247, theta=-0.1661, gamma=0.2792,
                       beta=(0.6860,)),
    "M5": FiegarchSpec(d=0.4900, omega=-5.8927, theta=-0.0215, gamma=0.3700,
                       alpha=(0.1409,), beta=(-0.1611,)),
    "M6": FiegarchSpec(d=0.4312, omega=-6.6829, theta=-0.1095, gamma=0.3376,
                       alpha=(0.5454,)),
}

# the simulation study drives every preset with this noise law
STUDY_DIST = InnovationDist(GED, nu=1.5)
