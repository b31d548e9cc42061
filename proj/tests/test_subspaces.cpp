#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cycloproj/fn_solver.hpp"
#include "cycloproj/rng.hpp"
#include "cycloproj/subspaces.hpp"

using namespace cycloproj;

namespace {

Subspace line(double phi) { return Subspace::span_real(2, {{std::cos(phi), std::sin(phi)}}); }

CVector random_vector(Rng& rng, std::size_t d) {
  CVector v(d);
  for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

SubspaceSystem random_system(Rng& rng, std::size_t n, std::size_t d, std::size_t rank) {
  std::vector<Subspace> subs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<CVector> vs;
    for (std::size_t k = 0; k < rank; ++k) vs.push_back(random_vector(rng, d));
    subs.push_back(Subspace::span(d, vs));
  }
  return SubspaceSystem(d, std::move(subs));
}

ComplexMatrix random_unitary(Rng& rng, std::size_t d) {
  std::vector<CVector> cols;
  for (std::size_t k = 0; k < d; ++k) cols.push_back(random_vector(rng, d));
  const Subspace q = Subspace::span(d, cols);
  ComplexMatrix u(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u(i, j) = q.basis()[j][i];
  return u;
}

}  // namespace

TEST_CASE("span orthonormalizes and drops dependent vectors") {
  const Subspace s = Subspace::span_real(3, {{1, 1, 0}, {2, 2, 0}, {0, 1, 0}});
  CHECK(s.rank() == 2);
  CHECK(Subspace::span_real(3, {}).rank() == 0);
  CHECK(Subspace::whole(4).rank() == 4);
  CHECK_THROWS_AS(Subspace::span_real(3, {{1, 0}}), PreconditionError);
  CHECK_THROWS_AS(SubspaceSystem(2, {line(0.0)}), PreconditionError);
  CHECK_THROWS_AS(SubspaceSystem(2, {line(0.0), Subspace::whole(3)}), PreconditionError);
}

TEST_CASE("projectors") {
  CHECK(max_abs(projector(Subspace::span_real(2, {{1, 0}})).matrix() - ComplexMatrix(2, 2, {1, 0, 0, 0})) <= 1e-15);
  const double phi = 0.4, c = std::cos(phi), s = std::sin(phi);
  CHECK(max_abs(projector(line(phi)).matrix() - ComplexMatrix(2, 2, {c * c, c * s, c * s, s * s})) <= 1e-15);
  CHECK(max_abs(projector(Subspace::whole(3)).matrix() - ComplexMatrix::identity(3)) <= 1e-15);
}

TEST_CASE("intersection projector") {
  CHECK(max_abs(intersection_projector(SubspaceSystem(2, {line(0.0), line(1.0)})).matrix()) <= 1e-12);

  const Subspace h = Subspace::span_real(3, {{1, 2, 0}, {0, 1, 1}});
  CHECK(max_abs(intersection_projector(SubspaceSystem(3, {h, h, h})).matrix() - projector(h).matrix()) <= 1e-10);

  const SubspaceSystem sys(3, {Subspace::span_real(3, {{1, 0, 0}, {0, 1, 0}}),
                               Subspace::span_real(3, {{0, 1, 0}, {0, 0, 1}})});
  ComplexMatrix e2(3, 3);
  e2(1, 1) = 1.0;
  CHECK(max_abs(intersection_projector(sys).matrix() - e2) <= 1e-10);
}

TEST_CASE("dixmier and friedrichs numbers on fixed systems") {
  const Subspace h = Subspace::span_real(3, {{1, 0, 0}, {0, 1, 1}});
  CHECK(std::abs(dixmier_number(SubspaceSystem(3, {h, h, h})) - 1.0) <= 1e-12);
  CHECK(friedrichs_number(SubspaceSystem(3, {h, h, h})) <= 1e-12);
  CHECK(dixmier_number(SubspaceSystem(2, {line(0.0), line(std::numbers::pi / 2)})) <= 1e-12);

  for (double phi : {0.1, 0.5, 1.0, std::numbers::pi / 3}) {
    const SubspaceSystem sys(2, {line(0.0), line(phi)});
    CHECK(std::abs(friedrichs_number(sys) - std::cos(phi)) <= 1e-9);
    CHECK(std::abs(dixmier_number(sys) - friedrichs_number(sys)) <= 1e-9);
  }
}

TEST_CASE("lines from a Gram factor have dixmier number at most c") {
  for (double c : {0.2, 0.5, 0.8}) {
    const FeasibleSpec spec = FeasibleSpec::make(3, c);
    const SolveResult r = maximize_product(spec, 4, 1);
    CHECK(dixmier_number(subspace_witness(r.optimum, spec).system) <= c + 1e-9);
  }
}

TEST_CASE("angles are invariant under permutation and unitary change of basis") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const SubspaceSystem sys = random_system(rng, 3, 5, 2);
    const AngleReport a = angles(sys);

    std::vector<Subspace> rev(sys.subspaces().rbegin(), sys.subspaces().rend());
    const AngleReport b = angles(SubspaceSystem(5, rev));
    CHECK(std::abs(a.dixmier - b.dixmier) <= 1e-10);
    CHECK(std::abs(a.friedrichs - b.friedrichs) <= 1e-10);

    const ComplexMatrix u = random_unitary(rng, 5);
    std::vector<Subspace> moved;
    for (const Subspace& s : sys.subspaces()) moved.push_back(s.transformed(u));
    const AngleReport m = angles(SubspaceSystem(5, moved));
    CHECK(std::abs(a.dixmier - m.dixmier) <= 1e-10);
    CHECK(std::abs(a.friedrichs - m.friedrichs) <= 1e-10);
  }
}

TEST_CASE("removing the intersection turns friedrichs into dixmier") {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector shared = random_vector(rng, 5);
    std::vector<Subspace> subs;
    for (int i = 0; i < 3; ++i) subs.push_back(Subspace::span(5, {shared, random_vector(rng, 5), random_vector(rng, 5)}));
    const SubspaceSystem sys(5, subs);
    CHECK(angles(sys).intersection_dim == 1);
    const SubspaceSystem reduced = remove_intersection(sys);
    CHECK(angles(reduced).intersection_dim == 0);
    CHECK(std::abs(dixmier_number(reduced) - friedrichs_number(sys)) <= 1e-9);
    CHECK(std::abs(friedrichs_number(reduced) - friedrichs_number(sys)) <= 1e-9);
  }
}

TEST_CASE("norm of the projector sum matches the definition of c_D") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(3);
    const SubspaceSystem sys = random_system(rng, n, 4, 1 + rng.below(3));
    const double by_def = dixmier_number_by_definition(sys);
    CHECK(std::abs(operator_norm(projector_sum(sys)) - 1.0 - (n - 1.0) * by_def) <= 1e-8);
  }
}
