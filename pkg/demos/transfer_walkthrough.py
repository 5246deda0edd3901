"""Walkthrough: kernel-intersection subgroups and the transfer cross-check.

Builds the quaternion group, computes the two kernel-intersection subgroups
T and Tbar for the degree-2 unitriangular witness family, evaluates the
A/B/C pairings, and runs the two-sided transfer check on a few quotients.

Run with:  python3 demos/transfer_walkthrough.py
"""

import pcohom as pc
from pcohom.pairings import a_pairing, c_pairing, pairing_kernels, transfer_check

G = pc.builtin_group("Q8")
fam = pc.omega_family("zassenhaus", 2, 2)

print(f"group: {G.name}, order {G.order}")
print(f"family: {fam.label} with witness groups of orders "
      f"{[e.E.order for e in fam.extensions]}")

bundle = pc.t_bundle(G, fam)
print(f"T(G) has order {bundle.T.order}  (intersection of kernels into the "
      f"full witness groups)")
print(f"Tbar(G) has order {bundle.Tbar.order}  (into their central quotients)")

# the pairings behind the kernel generating condition, for N1 = 1, N2 = Tbar
N1 = G.trivial_subgroup()
N2 = bundle.Tbar
pa = a_pairing(G, N1, N2, fam.p)
print(f"\nA-pairing matrix ({len(pa.left_labels)}x{len(pa.right_labels)}):")
print(pa.matrix)
print("flags:", {k: v for k, v in pairing_kernels(pa).items()
                 if k in ("rank", "perfect", "non_degenerate")})
out = c_pairing(G, N1, N2, fam)
print("B-pairing perfect:", out["B_flags"]["perfect"])
print("C-pairing perfect:", out["C_flags"]["perfect"])

# transfer check: does the image of T(G) in G/N equal T(G/N), and does
# that agree with the cohomological kernel condition?
print()
for label, N in [("trivial", N1), ("Tbar", N2)]:
    rep = transfer_check(G, N, fam)
    print(f"N = {label:8s}  side (a) transfer equality: "
          f"{rep['side_a_transfer']},  side (b) kernel condition: "
          f"{rep['side_b_kernel_condition']},  status: {rep['status']}")

# the same check over the whole catalog is one call (and one CLI command:
# pcohom transfer-sweep)
from pcohom.catalog import transfer_sweep

sweep = transfer_sweep(instances=[("Q8", G, 2)])
print(f"\nmini sweep: {sweep['checks']} checks, "
      f"{sweep['failures']} failures, all_pass={sweep['all_pass']}")
