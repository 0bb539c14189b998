#pragma once

// Recovery of the deformation matrix Q from a conjugated representation of a
// standard-invariant lattice, and the cup/cap closure category generated by
// seed endomorphism algebras.
//
// normalize() runs the two-stage unitary perturbation.  Stage one reads Q off
// the rank-one image of the first Jones projection by polar decomposition and
// trace balancing.  Stage two walks up the tower, choosing one unitary per
// tensor leg so that every Jones image becomes the canonical rank-one
// projection attached to Q.  The choices are made canonical by fixing phases,
// so normalizing an already-normalized representation yields identity legs.
//
// Leg 1 is never touched: the perturbation sequence starts {I, conj(U), ...}.
// Q is unique in that gauge.  Conjugating leg 1 by V turns a normalized
// representation into the normalized representation of V Q V*, so data
// scrambled on leg 1 as well recovers Q only up to its spectrum.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qlattice/closure_engine.hpp"
#include "qlattice/duality.hpp"
#include "qlattice/lattice.hpp"
#include "qlattice/moments.hpp"

namespace qlat {

// The first Jones image has rank above one, so no choice of leg unitaries
// can bring the representation to normalized form.
struct not_normalizable_error : compute_error {
  using compute_error::compute_error;
};

// The data cannot come from any standard-invariant lattice: a singular
// rank-one image, a non-unitary leg transition, or a Markov scale that
// disagrees with the recovered Q.
struct inconsistent_representation_error : compute_error {
  using compute_error::compute_error;
};

// A representation of the lattice cells on tensor legs.  Cell (i, j) acts on
// legs i+1 .. j (leg k carries H for odd k and the dual for even k); the
// image of the Jones projection e_k occupies legs k-1 and k.
struct PopaRepresentation {
  int n = 0;
  int bound = 0;
  double lambda = 0.0;
  std::map<CellKey, OperatorSpan> cells;
  std::map<int, TensorMap> jones;
};

// The identity representation carried by a built lattice.
PopaRepresentation rep_from_lattice(const PopaLattice& lat);

// ad(U_{i+1} (x) ... (x) U_j) applied cellwise; legs[k-1] acts on leg k and
// must be unitary.  Used to scramble a representation for round trips.
PopaRepresentation conjugate_representation(const PopaRepresentation& rep,
                                            const std::vector<Mat>& legs);

struct NormalizationResult {
  PopaRepresentation rep;     // the normalized representation
  QData q;                    // recovered deformation data
  std::vector<Mat> legs;      // legs[k-1] is the unitary applied to leg k
  double max_residual = 0.0;  // worst entry of `checks`
  std::vector<std::pair<std::string, double>> checks;
};

NormalizationResult normalize(const PopaRepresentation& rep, double tol = 1e-9);

// Largest distance of a Jones image from the canonical rank-one projection
// of q.  A normalized representation scores at most 10 * tol.
double normalized_residual(const PopaRepresentation& rep, const QData& q);

// Category generated by the duality cups/caps together with seed
// endomorphism algebras of alternating tensor words.  Hom spaces are
// materialized lazily from the closure fixed point and cached.
class ClosureCategory {
 public:
  ClosureCategory() = default;

  const DualityMaps& duality() const;
  int window() const { return window_; }

  // Hom space of the generated category; |x| + |y| must fit the window.
  OperatorSpan hom(const Word& x, const Word& y) const;
  std::size_t hom_dim(const Word& x, const Word& y) const;

  friend ClosureCategory closure(const DualityMaps& dm,
                                 const std::map<Word, OperatorSpan>& seeds,
                                 const std::vector<std::pair<Word, Word>>& pairs,
                                 double tol);

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::pair<Word, Word>, OperatorSpan> homs;
  };
  std::shared_ptr<ClosureEngine> engine_;
  std::shared_ptr<Cache> cache_;
  int window_ = 0;
};

// Runs the closure to its fixed point.  Seeds must be *-closed endomorphism
// algebras indexed by alternating words; `pairs` lists hom spaces to
// materialize eagerly and, together with the seeds, sets the word window.
ClosureCategory closure(const DualityMaps& dm,
                        const std::map<Word, OperatorSpan>& seeds,
                        const std::vector<std::pair<Word, Word>>& pairs,
                        double tol = 1e-9);

// dim hom(1, H^w) for every word w up to max_len, which for a closure seeded
// by the cells of a backend reproduces that backend's tilde moment table.
MomentTable universal_hom_dims(const ClosureCategory& cc, int max_len);

}  // namespace qlat
