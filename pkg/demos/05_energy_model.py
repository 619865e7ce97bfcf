"""The analytic savings model at headline parameters.

The rate of energy saved by localised rollback is (n/mu) * P_idle * C_e.
For radius-1 stencils P_idle is nearly n, so the rate grows as n^2: about
13 W at ten thousand nodes and 1.3 kW at a hundred thousand.
"""

from stencil_rollback.energy import (
    SECONDS_PER_YEAR,
    c_e,
    e_jacobi,
    p_active,
    p_idle,
    p_neigh,
    savings_rate,
)

mu = 50 * SECONDS_PER_YEAR
c_it = 10

print("neighbour involvement i iterations past a checkpoint:")
print("  i      1D    2D")
for i in range(c_it + 1):
    print(f"  {i:>2} {p_neigh(i, 1):>6.0f} {p_neigh(i, 2):>6.0f}")

print(f"\naveraged over a checkpoint block (c_it={c_it}):")
print(f"  p_active(1D) = {p_active(c_it, 1):.1f}")
print(f"  c_e(10 W, 4 s) = {c_e(10, 4, c_it):.0f} J per idle process and recovery")

for n in (10_000, 100_000):
    exact = savings_rate(n, mu, p_idle(n, c_it, 1), c_e(10, 4, c_it))
    print(f"  n={n:>6}: e_jacobi = {e_jacobi(n, mu, c_it):8.2f} W  "
          f"(with exact idle count: {exact:8.2f} W)")
