"""Numpy implementation of the ball evaluation kernel.

Enumerates all reduced words of length <= radius in length-then-lex order
(identical to words.FreeProduct.enumerate_ball) and carries the matrix
product for each word, renormalizing entries past a magnitude threshold into
a separate log factor.  Products are computed generation by generation with
one batched matmul per letter, then reassembled in (parent, letter) order.

Words whose product degenerates (non-finite entries, or an exact zero
matrix) are flagged rather than fatal, and the flag propagates to their
descendants.
"""

from __future__ import annotations

import numpy as np


def ball_evaluate(letter_mats: np.ndarray, radius: int,
                  renorm_threshold: float = 1e150) -> tuple:
    letter_mats = np.ascontiguousarray(letter_mats, dtype=np.complex128)
    if letter_mats.ndim != 3 or letter_mats.shape[1] != letter_mats.shape[2]:
        raise ValueError(f"letter matrix stack has bad shape {letter_mats.shape}")
    num_letters, d = letter_mats.shape[0], letter_mats.shape[1]
    if num_letters < 2 or num_letters % 2 != 0:
        raise ValueError("letter stack must hold generator/inverse pairs")
    if radius < 0:
        raise ValueError("radius must be >= 0")

    total = 1
    layer = num_letters
    for _ in range(radius):
        total += layer
        layer *= num_letters - 1

    lengths = np.zeros(total, dtype=np.int64)
    last_letters = np.full(total, -1, dtype=np.int64)
    parents = np.full(total, -1, dtype=np.int64)
    mats = np.empty((total, d, d), dtype=np.complex128)
    logscale = np.zeros(total, dtype=np.float64)
    flags = np.zeros(total, dtype=bool)

    mats[0] = np.eye(d)
    front_lo, front_hi = 0, 1
    for depth in range(1, radius + 1):
        f_mats = mats[front_lo:front_hi]
        f_last = last_letters[front_lo:front_hi]
        f_log = logscale[front_lo:front_hi]
        f_flag = flags[front_lo:front_hi]
        keys_parts, prod_parts, log_parts, par_parts, let_parts, flag_parts = \
            [], [], [], [], [], []
        for letter in range(num_letters):
            mask = f_last != (letter ^ 1)
            idx = np.nonzero(mask)[0]
            if idx.size == 0:
                continue
            keys_parts.append(idx * num_letters + letter)
            prod_parts.append(f_mats[idx] @ letter_mats[letter])
            log_parts.append(f_log[idx])
            par_parts.append(idx + front_lo)
            let_parts.append(np.full(idx.size, letter, dtype=np.int64))
            flag_parts.append(f_flag[idx])
        keys = np.concatenate(keys_parts)
        order = np.argsort(keys, kind="stable")
        prods = np.concatenate(prod_parts)[order]
        logs = np.concatenate(log_parts)[order]

        peaks = np.maximum(np.abs(prods.real).max(axis=(1, 2)),
                           np.abs(prods.imag).max(axis=(1, 2)))
        bad = ~np.isfinite(peaks) | (peaks == 0.0)
        renorm = ~bad & (peaks > renorm_threshold)
        if np.any(renorm):
            prods[renorm] /= peaks[renorm, None, None]
            logs[renorm] += np.log(peaks[renorm])

        lo = front_hi
        hi = lo + keys.size
        mats[lo:hi] = prods
        logscale[lo:hi] = logs
        parents[lo:hi] = np.concatenate(par_parts)[order]
        last_letters[lo:hi] = np.concatenate(let_parts)[order]
        lengths[lo:hi] = depth
        flags[lo:hi] = np.concatenate(flag_parts)[order] | bad
        front_lo, front_hi = lo, hi

    return lengths, last_letters, parents, mats, logscale, flags
