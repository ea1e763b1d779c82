#!/usr/bin/env python3
"""From a differential shot noise to its sign probability, step by step.

The difference S1 - x * S2 of two shot noises follows a heavy-tailed stable
law.  Walking it through the machinery: Form-A parameters, conversion to
Form B, normalization to unit scale, and finally the probability of a
negative value, which is one minus the ratio tail at x.
"""

from snratio import (
    RatioSpec,
    char_fn,
    convert,
    diff_stable_params,
    normalize_diff,
    ratio_ccdf,
    zero_crossing_prob,
)

spec = RatioSpec(lambda1=1.0, lambda2=0.5, alpha=3.0)
x = 2.0

params_a = diff_stable_params(x, spec)
print("Form A parameters of S1 - x*S2:")
print(f"  delta={params_a.delta:.6f} beta={params_a.beta:.6f} mu={params_a.mu:.6f}")

params_b = convert(params_a, "B")
print("Converted to Form B:")
print(f"  beta={params_b.beta:.6f} mu={params_b.mu:.6f}")

normalized, mu_b = normalize_diff(params_a)
print(f"Normalized to unit scale (mu_b={mu_b:.6f}):")
print(f"  beta={normalized.beta:.6f} mu={normalized.mu}")

p_negative = zero_crossing_prob(normalized)
print(f"P(difference < 0) = {p_negative:.6f}")
print(f"1 - that          = {1.0 - p_negative:.6f}")
print(f"ratio tail at x=2 = {ratio_ccdf(x, spec):.6f}   (same number)")

print("\nBoth parametrizations share one characteristic function:")
for t in (0.5, 2.0, -7.0):
    va = char_fn(params_a, t)
    vb = char_fn(params_b, t)
    print(f"  t={t:+5.1f}: form A {va:.6f}  form B {vb:.6f}  |gap|={abs(va - vb):.2e}")
