#ifndef SIGCAST_SIGNATURE_HPP
#define SIGCAST_SIGNATURE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sigcast {

// A multi-index identifying one signature term. Letters are channel
// indices into the path (0-based), listed innermost integral first.
struct Word {
    std::vector<int> letters;

    int level() const { return static_cast<int>(letters.size()); }
    bool operator==(const Word& o) const { return letters == o.letters; }
};

// Number of signature terms for a d-channel path truncated at `level`
// (sum of d^k for k = 1..level; the constant level-0 term is not counted).
std::size_t term_count(int dim, int level);

// Flat offset of the first level-k term. Words are ordered by level,
// then lexicographically within a level; this order is frozen because
// regression coefficients are reported per word.
std::size_t level_offset(int dim, int level);

std::size_t word_index(int dim, const Word& w);
Word word_at(int dim, std::size_t flat_index);

// Renders a word as comma-joined channel names, innermost letter first.
std::string word_to_string(const Word& w, const std::vector<std::string>& channel_names);

// A fully observed piecewise-linear multivariate path. `times` is the
// path parameter and only fixes segment order (signatures are invariant
// to reparameterization); when the path is time-augmented the clock
// lives in a value column, so vertical rectilinear segments are allowed.
struct Path {
    std::vector<double> times;              // strictly increasing
    Eigen::MatrixXd values;                 // rows = points, cols = channels
    std::vector<std::string> channel_names; // optional, may be empty

    int dim() const { return static_cast<int>(values.cols()); }
    int points() const { return static_cast<int>(values.rows()); }
    void validate() const; // throws std::invalid_argument
};

struct TruncatedSignature {
    int dim = 0;
    int level = 0;
    Eigen::VectorXd coeffs; // length term_count(dim, level); level-0 term (=1) implicit

    double coeff(const Word& w) const { return coeffs[static_cast<Eigen::Index>(word_index(dim, w))]; }
};

// Tensor exponential of a single linear segment with increment `delta`:
// the coefficient of word (i1..ik) is (prod_j delta[i_j]) / k!.
TruncatedSignature segment_signature(const Eigen::VectorXd& delta, int level);

// Chen's identity: the signature of a concatenation is the truncated
// tensor product of the two signatures (empty-word splits included).
TruncatedSignature chen_product(const TruncatedSignature& a, const TruncatedSignature& b);

// Exact truncated signature of a piecewise-linear path: left fold of
// chen_product over per-segment tensor exponentials.
TruncatedSignature signature(const Path& path, int level);

// 0.5 * (S^2(ij) - S^2(ji)); requires level >= 2 and i != j.
double levy_area(const TruncatedSignature& sig, int i, int j);

enum class KeepMode { All, AllLinear, Innermost };

KeepMode parse_keep_mode(const std::string& name); // throws on unknown mode

// Which words survive a filter_terms call, in frozen flat-index order.
struct TermSelection {
    std::vector<std::size_t> indices;
    std::vector<Word> words;

    std::size_t size() const { return indices.size(); }
};

// Enumerates retained words for a d-channel signature truncated at
// `level`. Pure-time words above t_level are dropped in every mode;
// `All` additionally keeps every mixed word, `AllLinear` keeps words
// with exactly one non-time letter, `Innermost` keeps only words of
// shape (x, t, t, ..., t).
TermSelection select_terms(int dim, int level, KeepMode mode, int time_channel, int t_level);

// Extracts the retained coefficients as a feature vector.
Eigen::VectorXd filter_terms(const TruncatedSignature& sig, const TermSelection& sel);

} // namespace sigcast

#endif
