#!/usr/bin/env python3
"""Finite-blocklength bounds for (3, 4) binary codes.

The converse caps every code; the random-coding bound is what a code drawn
at random achieves on average. The parity-check code meets the converse.
"""

import numpy as np

from cqadc import bsc, ml_success_exact, named_code, qsc_converse, qsc_rcb

spc = named_code("spc_3_2")
print(f"{'eps':>5} {'converse':>9} {'SPC':>9} {'RCB':>9}")
for eps in np.linspace(0.0, 0.5, 11):
    conv = qsc_converse(3, 4, 2, eps)
    rcb = qsc_rcb(3, 4, 2, eps)
    print(f"{eps:5.2f} {conv.value:9.6f} {ml_success_exact(spc, bsc(eps)):9.6f} {rcb.value:9.6f}")

res = qsc_converse(6, 8, 2, 0.1)
print(f"\n(6, 8) converse at eps=0.1: {res.value:.6f} with t={res.detail['t']}, A_t={res.detail['A_t']:g}")
