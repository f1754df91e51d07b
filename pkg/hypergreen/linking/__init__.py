''' biot-savart fields and linking numbers of closed curves '''
# bring the linking api into the namespace
from .curves import CurveError, CurveFile, ParamLoop
from .curves import load_curve_file, parse_curve_document, min_distance
from .quadrature import QuadratureError, QuadratureSpec
from .fields import FieldEvaluator, biot_savart_field
from .gauss import LinkResult, gauss_linking, classical_gauss_linking
from .gauss import isotopy_stability_check
from .crossings import CrossingOracleError, crossing_oracle
