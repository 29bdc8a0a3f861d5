"""Scale estimation behavior and the isotropy ratio across structure types.

Part 1 tabulates the ring-mean scale estimator on noise-free Gaussian
targets. Ring members sit at mixed true distances (ring 1 mixes d = 1 and
d = sqrt(2)), which biases each per-radius estimate low; the min rule picks
the most biased one, so expect 15-25% underestimation. The kernel scale the
detector derives from it is still in the right ballpark, and the isotropy
ratio downstream barely depends on it for genuinely isotropic targets.

Part 2 computes the Hessian isotropy ratio at the center of different
structures: Gaussian caps score near 1, ridges and edges near 0 -- the
separation the clutter suppression stage lives on.

Run:  python demos/demo_03_scale_and_isotropy.py
"""

import numpy as np

from irst import (
    ClutterSpec,
    GaussianTargetSpec,
    clutter_field,
    derivative_kernels,
    estimate_sigma,
    hessian_at,
    radial_profile,
    render_target,
)


def main():
    print("scale estimation on noise-free Gaussian targets (min over radii):")
    print("  true sigma   estimate   per-radius estimates        rel. error")
    for sigma_true in (0.8, 1.2, 1.6, 2.0):
        frame = render_target(
            GaussianTargetSpec(x=16, y=16, amplitude=100.0, sigma=sigma_true),
            (33, 33),
        )
        estimate = estimate_sigma(radial_profile(frame, 16, 16, 3))
        per = ", ".join(f"{s:.3f}" for s in estimate.per_radius)
        rel = (estimate.sigma - sigma_true) / sigma_true
        print(f"  {sigma_true:10.1f}   {estimate.sigma:8.3f}   [{per}]   {rel:+.1%}")

    print("\nisotropy at each structure's responsive pixel (matched kernel scale):")
    print("  a pixel survives with weight I when both eigenvalues are negative,")
    print("  and is dropped outright otherwise")
    size = 61
    center = size // 2

    cap = render_target(
        GaussianTargetSpec(x=center, y=center, amplitude=50.0, sigma=1.5), (size, size)
    )
    block = clutter_field(
        ClutterSpec(kind="block", x=center, y=center, amplitude=50.0,
                    sigma=1.5, width=16, height=12),
        (size, size),
    )
    probes = {
        "gaussian cap": (cap, center, center),
        "ridge crest": (
            clutter_field(
                ClutterSpec(kind="ridge", x=center, y=center, amplitude=50.0, sigma=1.5),
                (size, size),
            ),
            center, center,
        ),
        # the edge responds on its bright shoulder, not on the midline
        "edge shoulder": (
            clutter_field(
                ClutterSpec(kind="edge", x=center, y=center, amplitude=50.0, sigma=1.5),
                (size, size),
            ),
            center + 2, center,
        ),
        "block corner": (block, center + 7, center + 5),
        "isotropic decoy": (
            clutter_field(
                ClutterSpec(kind="blob", x=center, y=center, amplitude=50.0, sigma=1.5),
                (size, size),
            ),
            center, center,
        ),
    }
    kernels = derivative_kernels(1.5)
    for name, (field, px, py) in probes.items():
        sample = hessian_at(field, px, py, kernels)
        weight = sample.isotropy if sample.negative_definite else 0.0
        print(f"  {name:16s} I = {sample.isotropy:5.3f}   surviving weight = {weight:5.3f}")
    print("\nthe decoy scores like a real target: single-frame screening cannot")
    print("separate genuinely isotropic clutter; that is a documented limit.")


if __name__ == "__main__":
    main()
