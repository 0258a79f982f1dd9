"""Engineering a hypercyclic orbit for the weighted pullback translation.

Plain translations on the half-line are isometric and cannot have dense
orbits; with the exponential weight e^{kappa t} (kappa > 0) they can.  The
constructive recipe: place damped copies of the targets at well-separated
offsets in the flattened coordinate.  At the right moment the orbit weight
restores one block exactly while all later blocks are still exponentially
suppressed, so the orbit epsilon-hits every target on schedule.  A finite
certified hit list is the desk-scale surrogate for orbit density.
"""

import numpy as np

from conformal_flow import (GridFunction, Order, SpaceDescriptor, TargetList,
                            WeightCocycle, build_hypercyclic_candidate,
                            make_grid, norm_p_alpha, orbit_trace)

desc = SpaceDescriptor(p=2.0, order=Order(0.5), x_max=256.0, n=10_000)
xi = desc.xi_grid()
grid = make_grid(desc)

profiles = [("box of height 1 on (0, 1]", np.where(xi <= 1.0, 1.0, 0.0)),
            ("box of height 1.5 on (0, 0.5]", np.where(xi <= 0.5, 1.5, 0.0)),
            ("flipped box on (0.25, 0.75]",
             np.where((xi > 0.25) & (xi <= 0.75), -1.0, 0.0))]
targets = TargetList(targets=tuple(GridFunction(grid, v) for _, v in profiles),
                     support_length=1.0, epsilon=0.1)

cocycle = WeightCocycle(kappa=1.0)
cand = build_hypercyclic_candidate(desc, cocycle, targets)

print(f"candidate built: ||f|| = {norm_p_alpha(desc, cand.f):.4f}, "
      f"block spacing = {cand.spacing:.4f}")
print("\nhit schedule (analytic bound always dominates the measurement):")
for (name, _), t, d, b in zip(profiles, cand.hit_times, cand.hit_distances,
                              cand.tail_bounds):
    print(f"  t = {t:9.4f}  ->  {name:<30} distance = {d:.3e}  bound = {b:.3e}")

print("\nscanning the orbit over 200 probe times:")
probe = np.union1d(np.asarray(cand.hit_times),
                   np.geomspace(desc.h, 1.2 * cand.hit_times[-1], 200))
trace = orbit_trace(desc, cocycle, cand.f, targets, probe)
for j, (name, _) in enumerate(profiles):
    t_best, d_best = trace.min_distance(j)
    print(f"  target {j} ({name}): closest approach {d_best:.3e} at t = {t_best:.4f}")

print("\nnegative control: without the weight the orbit is isometric")
big = targets.targets[0] * (2.0 * (1.0 + norm_p_alpha(desc, cand.f)))
big_list = TargetList(targets=(big,), support_length=1.0, epsilon=0.1)
flat = orbit_trace(desc, WeightCocycle(kappa=0.0), cand.f, big_list,
                   np.linspace(0.0, 12.0, 50))
_, dmin = flat.min_distance(0)
floor = norm_p_alpha(desc, big) - norm_p_alpha(desc, cand.f)
print(f"  target of norm {norm_p_alpha(desc, big):.3f} vs orbit of norm "
      f"<= {norm_p_alpha(desc, cand.f):.3f}")
print(f"  min distance over the scan = {dmin:.4f} "
      f">= reverse-triangle floor {floor:.4f}")
