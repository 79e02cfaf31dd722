"""
How the error bounds scale with n and k
=======================================

With q = 2000 k samples, kappa_hat = 3 and ell = 1, the standard-error
bound built on the support width stops depending on n once n > 2k, and
stays flat in k when k/n is held fixed. The CV bounds shrink as k grows.
"""

from logminor.harness import figure3_rows

rows = figure3_rows(kappa_hat=3.0, ell=1.0, q_per_k=2000)

print("k = 30, n varies")
for r in rows:
    if r["panel"] == "n_sweep" and r["n"] in (31, 45, 60, 61, 100, 1000, 10000):
        print(f"  n={r['n']:>5}  B1={r['B1_se_logminor']:.5f}  B2={r['B2_se_logminor']:.5f}")

print("\nk/n = 0.1")
for r in rows:
    if r["panel"] == "ratio_sweep" and r["k"] in (1, 2, 5, 10, 50, 100):
        print(f"  k={r['k']:>3}  B2={r['B2_se_logminor']:.5f}  B2'(entropy)={r['B2p_cv_entropy']:.2e}")

# The CSV behind these numbers: `logminor figure-data --out sweeps.csv`
