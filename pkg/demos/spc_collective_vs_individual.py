#!/usr/bin/env python3
"""The [3, 2] parity-check code: measuring qubits one at a time vs. jointly.

Measured individually, the code sees a BSC and classical ML decoding is
already as good as any (3, 4) binary code can be. A joint measurement on all
three output qubits does strictly better for every 0 < gamma < 1, and the
resulting 4-ary channel is symmetric.
"""

import numpy as np

from cqadc import (
    adc,
    collective_optimum,
    eps_bsc,
    extract_qsc_eps,
    individual_success,
    named_code,
    pm_povm,
    pm_states,
    qsc_converse,
)

code = named_code("spc_3_2")
states = pm_states()

print(f"{'gamma':>6} {'individual':>11} {'converse':>11} {'collective':>11} {'eps_qsc':>10} {'residual':>9}")
for gamma in np.linspace(0.0, 1.0, 11):
    ch = adc(gamma)
    ind = individual_success(code, states, pm_povm(), ch)
    res = collective_optimum(code, states, ch)
    eps_q = extract_qsc_eps(code, states, ch)
    conv = qsc_converse(code.n, code.M, 2, eps_bsc(gamma)).value
    print(
        f"{gamma:6.2f} {ind:11.8f} {conv:11.8f} {res.success_probability:11.8f} "
        f"{eps_q:10.6f} {res.hykl_residual:9.1e}"
    )
