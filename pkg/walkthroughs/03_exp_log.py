"""Exponentials of locally nilpotent derivations and their logarithms.

Run: python walkthroughs/03_exp_log.py
"""

from lndkit import compose, exp_derivation, load_bundled, log_automorphism

sc = load_bundled("makar-limanov")
(_, D1), (_, D2) = sc.derivations

sigma = exp_derivation(D1)
print("exp(D1):", sigma)
print("preserves the relation:", sigma.preserves_relation())

# With a formal parameter the map lives on A[t1] (t is taken, so a fresh name is used).
flow = exp_derivation(D1, with_parameter=True)
print("exp(t1*D1):", flow)

print("log(exp(D1)) == D1:", log_automorphism(sigma) == D1)
print("exp(D1) o exp(D2) == exp(D1 + D2):", compose(sigma, exp_derivation(D2)) == exp_derivation(D1 + D2))
print("exp(D1) o exp(-D1) is the identity:", compose(sigma, exp_derivation(-D1)).is_identity())
