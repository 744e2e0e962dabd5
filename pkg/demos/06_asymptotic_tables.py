"""Residual tables along a dyadic n grid, with the trend gate."""

from entropylab.asymptotics import build_table
from entropylab.orthopoly import PollaczekParams

for lam, a in [(1, 0), (5, 5), (0.6, 1)]:
    table = build_table(PollaczekParams(lam, a), [25, 50, 100, 200])
    print(f"(lam, a) = ({lam}, {a})  theorem range: {table.theorem_range}")
    print("   n   E_residual   G_residual   F_limit   mrs_scaled")
    for r in table.rows:
        print(f"{r.n:4d} {r.E_residual:+12.5f} {r.G_residual:+12.5f} "
              f"{r.F_limit_residual:+9.5f} {r.mrs_scaled:+10.5f}")
    for col in table.asserted_columns():
        print(f"  {col} decays: {table.trend(col)}")
