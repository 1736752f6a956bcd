"""Small multiples of exp are hyperbolic, and so are their compositions; exp itself is not.

Run:  python demos/hyperbolic_composition.py
"""
from escdyn import compose, exp_map, format_expr
from escdyn.harness import check_postsingular_closure_nfold
from escdyn.singular import is_hyperbolic, order_estimate, postsingular_verdict, singular_superset

lam = exp_map(0.25)
for f in (lam, compose(lam, lam), compose(lam, compose(lam, lam)), exp_map(1)):
    sing = singular_superset(f)
    ps = postsingular_verdict(f, sing)
    att = [c.attractor for c in ps.classifications if c.attractor]
    where = f", attractor {att[0].point.real:.6f} (|mult| {att[0].multiplier:.4f})" if att else ""
    print(f"{format_expr(f)}")
    print(f"    {len(sing)} singular values (superset: {sing.over_approximate}), "
          f"postsingular {ps.label}, {is_hyperbolic(f, sing).value}{where}")

print(check_postsingular_closure_nfold([lam, lam, lam]).summary())
print(f"growth order of exp(0.25): {order_estimate(lam):.3f}")
