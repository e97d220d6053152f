"""Benchmark and demonstration programs, templated where a size varies.

``write_all`` materializes every fixture as a ``.qasm`` file so the CLI can
be pointed at them directly.
"""
from __future__ import annotations

from pathlib import Path

GHZ = """\
OPENQASM 3;
include "stdgates.inc";

qubit q[3];
h q[0];
cx q[0], q[1];
cx q[1], q[2];
"""

INLINE_CANCEL = """\
def foo qubit[2]:qq {
  cx qq[0], qq[1];
}

qubit q[2];
foo q;
cx q[0], q[1];
"""

# q has five qubits so that the action on q[4] is in range.
COMPUTE_ACTION = """\
qubit q[5];
let bottom_three = q[1:3];
compute {
    rx(1.57) q[0];
    h bottom_three;
    for i in [0:3] {
      cnot q[i], q[i + 1];
    }
} action {
    rz(2.2) q[4];
}
"""

_DEUTERON = """\
OPENQASM 3;
include "stdgates.inc";

const shots = {shots};
// State-preparation:
def ansatz(float[64]:theta) qubit[2]:q {{
    x q[0];
    ry(theta) q[1];
    cx q[1], q[0];
}}

def compute(float[64]:theta) qubit[2]:q -> float[64] {{
    bit first, second;
    float[64] num_parity_ones = 0.0;
    float[64] result;
    for i in [0:shots] {{
        ansatz(theta) q;
        // Change measurement basis
        h q;
        // Measure
        first = measure q[0];
        second = measure q[1];
        if (first != second) {{
            num_parity_ones += 1.0;
        }}
        // Reset
        reset q;
    }}

    // Compute expectation value
    result = (shots - num_parity_ones) / shots - num_parity_ones / shots;
    return result;
}}

float[64] theta, exp_val;
qubit qq[2];
// Try a theta value:
theta = {theta!r};
exp_val = compute(theta) qq;
print("Avg <X0X1> = ", exp_val);
"""

_HEISENBERG_HEAD = """\
const nb_qubits = {n};
def heisenberg_U() qubit[nb_qubits]:r {{

  // Extension-provided C-like data types
  int nb_steps = {steps};
  double step_size = .01;
  double Jz = 1.0;
  double h = 1.0;

  for step in [0:nb_steps] {{
    // -h*sigma_x layers
    rx(-h * step_size) r;
"""

_HEISENBERG_CA = """
    // -Jz*sigma_z*sigma_z layers
    for i in [0:nb_qubits-1] {
      compute {
        cx r[i], r[i+1];
      } action {
        rz(-Jz * step_size) r[i + 1];
      }
    }
"""

_HEISENBERG_MANUAL = """
    // -Jz*sigma_z*sigma_z layers
    for i in [0:nb_qubits-1] {
      cx r[i], r[i+1];
      rz(-Jz * step_size) r[i + 1];
      cx r[i], r[i+1];
    }
"""

_HEISENBERG_TAIL = """\
  }
}

// Allocate the qubits
qubit r[nb_qubits], c;

// Perform ctrl-U
ctrl @ heisenberg_U c, r;
"""

_TROTTER = """\
OPENQASM 3;

const nb_steps = {steps};
const nb_qubits = {n};
const step_size = 0.01;
const Jz = 1.0;
const h = 1.0;

qubit r[nb_qubits];
for step in [0:nb_steps] {{
  // -h*sigma_x layers
  for i in [0:nb_qubits] {{
    rx(-h * step_size) r[i];
  }}

  // -Jz*sigma_z*sigma_z layers
  for i in [0:nb_qubits - 1] {{
    cx r[i], r[i+1];
    rz(-Jz * step_size) r[i + 1];
    cx r[i], r[i+1];
  }}
}}
"""


def ghz() -> str:
    return GHZ


def inline_cancel() -> str:
    return INLINE_CANCEL


def compute_action() -> str:
    return COMPUTE_ACTION


def deuteron(theta: float = 0.123, shots: int = 1024) -> str:
    """Pauli XX expectation over a two-qubit ansatz, sampled ``shots`` times."""
    return _DEUTERON.format(theta=float(theta), shots=int(shots))


def heisenberg(n: int, variant: str = "compute_action", layers: str = "all", steps: int = 100) -> str:
    """Controlled Heisenberg Trotter step program.

    ``variant`` selects the ZZ layer spelling (``compute_action`` or
    ``manual``); ``layers="x"`` drops the ZZ layer entirely so its
    contribution can be isolated by subtraction.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if variant not in ("compute_action", "manual"):
        raise ValueError(f"unknown variant {variant!r}")
    if layers not in ("all", "x"):
        raise ValueError(f"unknown layers {layers!r}")
    body = _HEISENBERG_HEAD.format(n=n, steps=steps)
    if layers == "all":
        body += _HEISENBERG_CA if variant == "compute_action" else _HEISENBERG_MANUAL
    return body + _HEISENBERG_TAIL


def trotter(n: int, steps: int = 100) -> str:
    """Transverse-field Ising Trotter circuit on ``n`` qubits."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return _TROTTER.format(n=n, steps=steps)


FIXTURES = {
    "ghz": ghz,
    "inline_cancel": inline_cancel,
    "compute_action": compute_action,
    "deuteron": deuteron,
    "heisenberg_ctrl": lambda: heisenberg(6),
    "heisenberg_ctrl_manual": lambda: heisenberg(6, "manual"),
    "trotter_50": lambda: trotter(50),
}


def write_all(directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, fn in FIXTURES.items():
        path = out / f"{name}.qasm"
        path.write_text(fn())
        paths.append(path)
    return paths
