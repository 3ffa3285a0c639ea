# -*- coding: utf-8 -*-
"""Online subspace tracking on the Grassmann manifold, with certificates and a behavioral systems layer.

Contents:

* :mod:`subtrack.tracking.grassmann`: subspace representations, principal angles, metrics, tangent projections
  and the exponential map.
* :mod:`subtrack.tracking.window`: sliding and discounted data windows with recursive covariance updates.
* :mod:`subtrack.tracking.great`: the windowed Riemannian gradient tracker (cost, gradient, inner loop, streaming loop).
* :mod:`subtrack.tracking.certs`: closed-form certificates (noise bound, decay rates, feasibility, tube radii,
  step-size tuning).
* :mod:`subtrack.tracking.behavior`: Hankel matrices, restricted behaviors of LTV systems, subspace predictors.
* :mod:`subtrack.tracking.simgen`: seeded generators for synthetic geodesic datasets.
* :mod:`subtrack.tracking.baselines`: GROUSE and PAST comparison trackers.
* :mod:`subtrack.tracking.experiments` and :mod:`subtrack.tracking.cli`: config-driven experiment harness.

"""
