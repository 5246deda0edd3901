"""Walkthrough: where the transfer equality fails.

The harness verifies, with exact arithmetic over F_2:

1. the degree-2 Magnus components of the 36 pair commutators tau_ij on 9
   letters are linearly independent;
2. tau_12 stays outside the span of the perturbed sums tau_12 + tau_ij,
   and degree-2 components are conjugation-invariant, so no product of
   conjugates of the other commutators reproduces tau_12 modulo degree 3;
3. an exhaustive pruned search finds no assignment of 9 values in the
   Heisenberg group over F_2 whose pairs share a common nontrivial
   commutator (while the 2-letter control case does admit some);
4. the induced finite instance: the order-32 free-nilpotent stand-in maps
   onto the quaternion group, and on that quotient both the transfer
   equality and the kernel generating condition fail -- in agreement,
   which is exactly what the equivalence predicts.

Run with:  python3 demos/counterexample_walkthrough.py
"""

import json

from pcohom.magnus import counterexample_harness

rep = counterexample_harness(k=9, p=2)

print(f"pairs: {rep['pairs']}, degree-2 rank: {rep['deg2_rank']} "
      f"(full: {rep['deg2_rank_full']})")
print(f"tau_12 outside perturbed span: {rep['tau12_outside_perturbed_span']}")
print(f"conjugation-invariant degree-2 components: "
      f"{rep['conjugation_invariant_deg2']} "
      f"({rep['conjugate_trials']} random conjugates)")
print(f"common-commutator completions: {rep['common_commutator_completions']}"
      f" over {rep['explored_prefixes']} explored prefixes")
print(f"control (2 letters): {rep['control_k2_completions']} completions "
      f"over {rep['control_k2_explored']} prefixes")

ind = rep["induced_instance"]
tr = ind["transfer_report"]
print(f"\ninduced instance: stand-in of order {ind['standin_order']} -> "
      f"quaternion group, kernel of order {ind['kernel_order']}")
print(f"  transfer equality:        {tr['side_a_transfer']}")
print(f"  kernel condition:         {tr['side_b_kernel_condition']}")
print(f"  equivalence cross-check:  {tr['status']}")

print(f"\nverdict: {rep['verdict']}  ({rep['elapsed_seconds']}s)")
print("\nfull report:")
print(json.dumps(rep, indent=2, default=str))
