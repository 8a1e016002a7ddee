"""Valores por defecto y tolerancias compartidas por todos los solvers."""

# Rango de acoplamiento soportado por la solución exacta
GAMMA_MIN = 1e-4
GAMMA_MAX = 1e5

# Discretización
DEFAULT_NODES = 128
MAX_NODES = 4096
# Nodos por unidad de 1/λ necesarios para resolver el núcleo lorentziano
NODES_PER_INVERSE_WIDTH = 16.0
NODE_BLOCK = 16

# Tolerancias
LINEAR_TOL = 1e-12
FIXED_POINT_TOL = 1e-10
ROOT_XTOL = 1e-15
DERIVATIVE_STEP = 1e-3

# Malla de medio eje: el panel denso cubre [0, BREAK_FACTOR * escala]
BREAK_FACTOR = 6.0

# Gaussiano
DEFAULT_DAMPING = 0.5
MAX_FIXED_POINT_ITER = 2000
MAX_DAMPING_RETRIES = 4

# Ramas de excitación
DEFAULT_Q_POINTS = 64
MIN_Q_POINTS = 8
Q_SPAN_FACTOR = 3.0
MAX_FAILED_FRACTION = 0.10

# Parámetros de las figuras (ρ = 1, T = 0)
FIGURE_GAMMAS = {3: 0.787094, 4: 3.07725}
FIGURE_GAMMA_MIN = 0.05
FIGURE_GAMMA_MAX = 20.0
FIGURE_POINTS = 40
