import sys
from pathlib import Path

# make tests/oracles.py importable regardless of how pytest is invoked
sys.path.insert(0, str(Path(__file__).resolve().parent))

# (expression, safe evaluation window) pairs: smooth to fourth order on
# the window, comfortably inside every function's domain
SMOOTH_CORPUS = (
    ("x^4", (0.1, 3.0)),
    ("x^3-2*x+1", (-2.0, 2.0)),
    ("sin(x)", (-3.0, 3.0)),
    ("exp(2*x)", (-1.0, 1.0)),
    ("x*exp(x)", (-1.0, 1.5)),
    ("log(1+x)", (0.0, 3.0)),
    ("sqrt(x)", (0.5, 4.0)),
    ("sin(x)*exp(x)+x^2", (-1.0, 1.0)),
    ("1/(1+x)", (0.0, 3.0)),
    ("x^2.5", (0.5, 2.0)),
)
