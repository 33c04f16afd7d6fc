"""
Exact rational polytopes: hulls, volumes, projections, sections
================================================================

Every quantity printed here is computed in exact rational arithmetic;
floats appear only when a value is irrational (then the library returns
a certified enclosure or an exact square-root decomposition).
"""

from geomineq import (
    convex_hull,
    make_cross_polytope,
    make_cube,
    make_simplex,
    project_coordinate,
    rat,
    section_coordinate,
    section_hyperplane,
    surface_area,
)

# The three standard bodies and their exact volumes.
cube = make_cube(4)
cross = make_cross_polytope(4)
simplex = make_simplex(4)
print("volume [0,1]^4        =", cube.volume())
print("volume B_1^4          =", cross.volume())
print("volume standard 4-simplex =", simplex.volume())

# Hulls reduce redundant points and keep exact vertices.
square_with_center = convex_hull([
    [rat(0), rat(0)], [rat(2), rat(0)], [rat(0), rat(2)],
    [rat(2), rat(2)], [rat(1), rat(1)]])
print("vertices after hull reduction:", square_with_center.n_vertices)

# Coordinate projections stay rational polytopes.
shadow = project_coordinate(cross, (1, 2))
print("area of B_1^4 shadow on the (x1,x2)-plane =", shadow.volume())

# Sections by coordinate subspaces are exact too.
slice_ = section_coordinate(cross, (1, 2, 3))
print("volume of B_1^4 cap span(e1,e2,e3) =", slice_.volume())

# A general rational hyperplane section: volume decomposes as
# coeff * sqrt(gram) with both factors exact rationals.
diag = section_hyperplane(make_cube(3), [rat(1), rat(1), rat(1)], rat(3, 2))
coeff, gram = diag.volume_sqrt_parts()
print("hexagonal cube section: coeff =", coeff, " gram =", gram,
      " coeff^2 * gram =", coeff * coeff * gram)

# Surface area of the cross-polytope is 2^n sqrt(n) / (n-1)!, also
# returned as an exact square-root decomposition.
coeff, gram = surface_area(make_cross_polytope(3))
print("surface B_1^3: coeff =", coeff, " gram =", gram)
