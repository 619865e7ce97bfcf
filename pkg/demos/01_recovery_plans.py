"""What each rollback strategy recomputes after one failure.

Nine processes run a 1D stencil; process 4 dies three iterations past the
last checkpoint (d = 3).  Global rollback redoes everything, the two
data-flow variants confine recompute to the failure's neighbourhood, and
log-based replay touches only the replacement.
"""

from stencil_rollback import make_plan, recompute_count_closed_form
from stencil_rollback.topology import ProcessTopology

n, failed, d, last_ckpt = 9, 4, 3, 4
topo = ProcessTopology.line(n)

print(f"{n} processes, process {failed} fails {d} iterations past checkpoint {last_ckpt}\n")
for strategy in ("global", "dfr-rect", "dfr-min", "log"):
    plan = make_plan(strategy, failed, d, topo, last_ckpt)
    closed = recompute_count_closed_form(strategy, n, d, failed)
    tasks = sorted((t.iteration, t.process) for t in plan.recompute)
    print(f"{strategy:>9}: {len(plan.recompute):>3} tasks (closed form {closed})")
    print(f"           participants {sorted(plan.participants)}, idle {sorted(plan.idle)}")
    print(f"           recompute {[(p, i) for i, p in tasks]}")
    print()
