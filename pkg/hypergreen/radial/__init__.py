''' the radial ode for green's functions of the form laplacian '''
# bring the radial api into the namespace
from .system import RadialSystem, RadialSolveError, LevinsonData
from .system import assemble_system, levinson_form, indicial_roots
from .frobenius import FrobeniusError, FrobeniusSeries, SingularData
from .frobenius import frobenius_init, singular_series, regular_series
from .profile import GridSpec, RadialProfile, ProfileFormatError
from .profile import hodge_swap
from .solve import ShootingError, integrate, decaying_solution
