"""Coverage and inspection path generation.

Survey paths are boustrophedon (lawnmower) lanes over a rectangle; the lane
count is floor(short_side / lane_spacing) + 1, lanes run parallel to the
long axis, spaced one lane_spacing apart with any remainder split evenly
between the two edges so every region point stays within lane_spacing / 2
of the path.  Inspection paths are closed regular polygons around a point.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadParameter


def generate_survey_path(region, lane_spacing: float, depth: float):
    """Lawnmower path over region (cx, cy, width, height) at a fixed depth.

    Returns a list of (x, y, z) waypoints.
    """
    if lane_spacing <= 0:
        raise BadParameter("lane_spacing must be > 0")
    cx, cy, width, height = region
    if width <= 0 or height <= 0:
        raise BadParameter("region sides must be > 0")

    # Lanes run along the long axis; offsets step across the short axis.
    along_x = width >= height
    long_side = width if along_x else height
    short_side = height if along_x else width

    n_lanes = int(short_side // lane_spacing) + 1
    if n_lanes == 1:
        offsets = [0.0]
    else:
        span = (n_lanes - 1) * lane_spacing
        start = -span / 2.0
        offsets = [start + i * lane_spacing for i in range(n_lanes)]

    half = long_side / 2.0
    waypoints = []
    for i, off in enumerate(offsets):
        ends = (-half, half) if i % 2 == 0 else (half, -half)
        for e in ends:
            if along_x:
                waypoints.append((cx + e, cy + off, depth))
            else:
                waypoints.append((cx + off, cy + e, depth))
    return waypoints


def generate_inspection_path(center, radius: float, n_points: int):
    """Closed circumnavigation loop: n_points on the circle, first repeated
    at the end."""
    if radius <= 0:
        raise BadParameter("radius must be > 0")
    if n_points < 3:
        raise BadParameter("need at least 3 points")
    cx, cy, cz = center
    waypoints = []
    for k in range(n_points):
        theta = 2.0 * math.pi * k / n_points
        waypoints.append((cx + radius * math.cos(theta), cy + radius * math.sin(theta), cz))
    waypoints.append(waypoints[0])
    return waypoints


def path_length(waypoints) -> float:
    pts = np.asarray(waypoints, dtype=float)
    if len(pts) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def point_to_path_distance(point, waypoints) -> float:
    """Planar (x, y) distance from a point to the nearest path segment."""
    px, py = point[0], point[1]
    best = math.inf
    for (x1, y1, *_), (x2, y2, *_) in zip(waypoints, waypoints[1:]):
        dx, dy = x2 - x1, y2 - y1
        seg2 = dx * dx + dy * dy
        if seg2 == 0:
            d = math.hypot(px - x1, py - y1)
        else:
            t = max(0.0, min(1.0, ((px - x1) * dx + (py - y1) * dy) / seg2))
            d = math.hypot(px - (x1 + t * dx), py - (y1 + t * dy))
        best = min(best, d)
    return best
