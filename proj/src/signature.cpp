#include "sigcast/signature.hpp"

#include <cmath>
#include <stdexcept>

namespace sigcast {

std::size_t term_count(int dim, int level) {
    if (dim < 1 || level < 1) throw std::invalid_argument("term_count: dim and level must be >= 1");
    std::size_t total = 0, pow = 1;
    for (int k = 1; k <= level; ++k) {
        pow *= static_cast<std::size_t>(dim);
        total += pow;
    }
    return total;
}

std::size_t level_offset(int dim, int level) {
    return level == 1 ? 0 : term_count(dim, level - 1);
}

std::size_t word_index(int dim, const Word& w) {
    if (w.level() < 1) throw std::invalid_argument("word_index: empty word");
    std::size_t idx = 0;
    for (int letter : w.letters) {
        if (letter < 0 || letter >= dim) throw std::invalid_argument("word_index: letter out of range");
        idx = idx * static_cast<std::size_t>(dim) + static_cast<std::size_t>(letter);
    }
    return level_offset(dim, w.level()) + idx;
}

Word word_at(int dim, std::size_t flat_index) {
    int level = 1;
    std::size_t block = static_cast<std::size_t>(dim);
    std::size_t rem = flat_index;
    while (rem >= block) {
        rem -= block;
        block *= static_cast<std::size_t>(dim);
        ++level;
    }
    Word w;
    w.letters.assign(level, 0);
    for (int i = level - 1; i >= 0; --i) {
        w.letters[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(dim));
        rem /= static_cast<std::size_t>(dim);
    }
    return w;
}

std::string word_to_string(const Word& w, const std::vector<std::string>& channel_names) {
    std::string out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) out += ',';
        int c = w.letters[i];
        if (c >= 0 && static_cast<std::size_t>(c) < channel_names.size() && !channel_names[static_cast<std::size_t>(c)].empty())
            out += channel_names[static_cast<std::size_t>(c)];
        else
            out += "c" + std::to_string(c);
    }
    return out;
}

void Path::validate() const {
    if (points() < 2) throw std::invalid_argument("Path: need at least 2 points");
    if (times.size() != static_cast<std::size_t>(points()))
        throw std::invalid_argument("Path: times/values row mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("Path: times must be strictly increasing");
    if (!values.allFinite()) throw std::invalid_argument("Path: non-finite values");
}

TruncatedSignature segment_signature(const Eigen::VectorXd& delta, int level) {
    const int d = static_cast<int>(delta.size());
    TruncatedSignature s;
    s.dim = d;
    s.level = level;
    s.coeffs.setZero(static_cast<Eigen::Index>(term_count(d, level)));
    s.coeffs.head(d) = delta;
    std::size_t prev_off = 0, prev_len = static_cast<std::size_t>(d);
    for (int k = 2; k <= level; ++k) {
        const std::size_t off = prev_off + prev_len;
        const double inv_k = 1.0 / k;
        // level-k block is (level-(k-1) block) tensor delta, scaled by 1/k
        for (std::size_t p = 0; p < prev_len; ++p) {
            const double base = s.coeffs[static_cast<Eigen::Index>(prev_off + p)] * inv_k;
            for (int j = 0; j < d; ++j)
                s.coeffs[static_cast<Eigen::Index>(off + p * static_cast<std::size_t>(d) + static_cast<std::size_t>(j))] =
                    base * delta[j];
        }
        prev_off = off;
        prev_len *= static_cast<std::size_t>(d);
    }
    return s;
}

TruncatedSignature chen_product(const TruncatedSignature& a, const TruncatedSignature& b) {
    if (a.dim != b.dim || a.level != b.level)
        throw std::invalid_argument("chen_product: dimension or level mismatch");
    const int d = a.dim, K = a.level;
    TruncatedSignature c;
    c.dim = d;
    c.level = K;
    // empty-word splits give a + b
    c.coeffs = a.coeffs + b.coeffs;
    // block lengths d^1..d^K and their offsets
    std::vector<std::size_t> off(static_cast<std::size_t>(K) + 1), len(static_cast<std::size_t>(K) + 1);
    len[1] = static_cast<std::size_t>(d);
    off[1] = 0;
    for (int k = 2; k <= K; ++k) {
        off[static_cast<std::size_t>(k)] = off[static_cast<std::size_t>(k - 1)] + len[static_cast<std::size_t>(k - 1)];
        len[static_cast<std::size_t>(k)] = len[static_cast<std::size_t>(k - 1)] * static_cast<std::size_t>(d);
    }
    for (int k = 2; k <= K; ++k) {
        double* ck = c.coeffs.data() + off[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) {
            // prefix (innermost j letters) from a, suffix (k-j letters) from b
            const double* aj = a.coeffs.data() + off[static_cast<std::size_t>(j)];
            const double* bk = b.coeffs.data() + off[static_cast<std::size_t>(k - j)];
            const std::size_t nb = len[static_cast<std::size_t>(k - j)];
            for (std::size_t p = 0; p < len[static_cast<std::size_t>(j)]; ++p) {
                const double ap = aj[p];
                if (ap == 0.0) continue;
                double* dst = ck + p * nb;
                for (std::size_t s = 0; s < nb; ++s) dst[s] += ap * bk[s];
            }
        }
    }
    return c;
}

TruncatedSignature signature(const Path& path, int level) {
    path.validate();
    if (level < 1) throw std::invalid_argument("signature: level must be >= 1");
    TruncatedSignature sig = segment_signature((path.values.row(1) - path.values.row(0)).transpose(), level);
    for (int i = 2; i < path.points(); ++i)
        sig = chen_product(sig, segment_signature((path.values.row(i) - path.values.row(i - 1)).transpose(), level));
    return sig;
}

double levy_area(const TruncatedSignature& sig, int i, int j) {
    if (sig.level < 2) throw std::invalid_argument("levy_area: need level >= 2");
    if (i == j) throw std::invalid_argument("levy_area: channels must differ");
    Word ij{{i, j}}, ji{{j, i}};
    return 0.5 * (sig.coeff(ij) - sig.coeff(ji));
}

KeepMode parse_keep_mode(const std::string& name) {
    if (name == "all") return KeepMode::All;
    if (name == "all_linear") return KeepMode::AllLinear;
    if (name == "innermost") return KeepMode::Innermost;
    throw std::invalid_argument("unknown keep_sigs mode: " + name);
}

TermSelection select_terms(int dim, int level, KeepMode mode, int time_channel, int t_level) {
    if (time_channel < 0 || time_channel >= dim) throw std::invalid_argument("select_terms: bad time channel");
    if (t_level > level) throw std::invalid_argument("select_terms: t_level exceeds level");
    TermSelection sel;
    const std::size_t n = term_count(dim, level);
    for (std::size_t idx = 0; idx < n; ++idx) {
        Word w = word_at(dim, idx);
        int non_time = 0;
        for (int letter : w.letters) non_time += (letter != time_channel);
        const bool pure_time = (non_time == 0);
        if (pure_time && w.level() > t_level) continue;
        bool keep = false;
        switch (mode) {
            case KeepMode::All:
                keep = true;
                break;
            case KeepMode::AllLinear:
                keep = pure_time || non_time == 1;
                break;
            case KeepMode::Innermost:
                // data letter innermost, all outer integrals in time
                keep = pure_time || (non_time == 1 && w.letters.front() != time_channel);
                break;
        }
        if (keep) {
            sel.indices.push_back(idx);
            sel.words.push_back(std::move(w));
        }
    }
    return sel;
}

Eigen::VectorXd filter_terms(const TruncatedSignature& sig, const TermSelection& sel) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(sel.size()));
    for (std::size_t i = 0; i < sel.size(); ++i) {
        if (sel.indices[i] >= static_cast<std::size_t>(sig.coeffs.size()))
            throw std::invalid_argument("filter_terms: selection exceeds signature level");
        out[static_cast<Eigen::Index>(i)] = sig.coeffs[static_cast<Eigen::Index>(sel.indices[i])];
    }
    return out;
}

} // namespace sigcast
