#include "typomap/semmap.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/linalg.hpp"
#include "typomap/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace typomap {

DistanceMatrix hamming_matrix(const std::vector<UsagePoint>& points,
                              const std::vector<std::string>& languages) {
    const std::size_t n = points.size();
    DistanceMatrix d(n);
    // flatten labels once; map lookups inside the O(n^2) loop would dominate
    std::vector<std::vector<const std::string*>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].reserve(languages.size());
        for (const std::string& code : languages) {
            auto it = points[i].labels.find(code);
            if (it == points[i].labels.end())
                throw Error("usage point " + points[i].verse_id + " lacks a label for '" + code +
                            "'");
            rows[i].push_back(&it->second);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            int diff = 0;
            for (std::size_t l = 0; l < languages.size(); ++l)
                if (*rows[i][l] != *rows[j][l]) ++diff;
            d.set(i, j, static_cast<double>(diff));
        }
    }
    return d;
}

namespace {

// deterministic start vector for the power iteration
std::vector<double> seeded_vector(std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    for (std::size_t i = 0; i < n; ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] = static_cast<double>(s % 1000003) / 1000003.0 - 0.5;
    }
    return v;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    for (const std::vector<double>& b : basis) {
        const double proj = linalg::dot(v, b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
    }
}

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

// Dominant eigenpair of the (deflated) Gram matrix via shifted power
// iteration. The Gershgorin shift makes the spectrum nonnegative, so the
// iteration homes in on the algebraically largest eigenvalue even when B is
// indefinite.
EigenPair dominant_eigenpair(const linalg::Matrix& b, double shift,
                             const std::vector<std::vector<double>>& deflated, double tol,
                             int max_iters) {
    const std::size_t n = b.rows();
    std::vector<double> v = seeded_vector(n, 0x9e3779b97f4a7c15ULL + deflated.size());
    orthogonalize(v, deflated);
    double norm = linalg::norm2(v);
    if (norm == 0.0) throw Error("power iteration: degenerate start vector");
    for (double& x : v) x /= norm;

    // iterate past the documented tolerance until progress stalls; the
    // per-step delta overstates accuracy when the spectral gap is small
    double best_delta = 1e300;
    int stalled = 0;
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> w = linalg::mat_vec(b, v);
        for (std::size_t i = 0; i < n; ++i) w[i] += shift * v[i];
        // deflation by projection; valid because B is symmetric
        orthogonalize(w, deflated);
        const double wnorm = linalg::norm2(w);
        if (wnorm == 0.0) break; // v is in the null space of B + shift*I
        for (double& x : w) x /= wnorm;
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::fabs(w[i] - v[i]));
        v = std::move(w);
        if (delta < 1e-15) break;
        if (delta < tol) {
            // converged per the nominal tolerance; keep polishing while the
            // iterates still move
            if (delta < best_delta * 0.999) {
                best_delta = delta;
                stalled = 0;
            } else if (++stalled >= 8) {
                break;
            }
        }
    }
    // Rayleigh quotient of the unshifted matrix
    const std::vector<double> bv = linalg::mat_vec(b, v);
    return {linalg::dot(v, bv), v};
}

} // namespace

MdsResult classical_mds(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 3) throw Error("classical_mds: need at least 3 points");

    // B = -1/2 J D^2 J  (double centering)
    linalg::Matrix b(n, n);
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d2 = dist.at(i, j) * dist.at(i, j);
            b.at(i, j) = d2;
            row_mean[i] += d2;
        }
        grand += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b.at(i, j) = -0.5 * (b.at(i, j) - row_mean[i] - row_mean[j] + grand);

    // Gershgorin bound for the shift
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += std::fabs(b.at(i, j));
        shift = std::max(shift, r);
    }

    constexpr double kTol = 1e-10;
    constexpr int kMaxIters = 10000;
    std::vector<std::vector<double>> basis;
    EigenPair first = dominant_eigenpair(b, shift, basis, kTol, kMaxIters);
    basis.push_back(first.vector);
    EigenPair second = dominant_eigenpair(b, shift, basis, kTol, kMaxIters);

    MdsResult result;
    result.eigenvalues = {first.value, second.value};
    result.coords.assign(n, {0.0, 0.0});

    auto emit_axis = [&](std::size_t axis, const EigenPair& pair) {
        const double scale = std::sqrt(std::max(pair.value, 0.0));
        // orient: largest-magnitude coordinate positive
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(pair.vector[i]) > std::fabs(pair.vector[arg])) arg = i;
        const double sign = pair.vector[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            result.coords[i][axis] = sign * pair.vector[i] * scale;
    };

    if (first.value <= 0.0) {
        // all-zero (or degenerate) dissimilarities: every point at origin
        result.degenerate_second_axis = true;
        return result;
    }
    emit_axis(0, first);
    // an exactly-1D metric yields a second eigenvalue of zero up to
    // rounding; treat anything at noise level as nonpositive
    if (second.value <= 1e-12 * first.value) {
        result.degenerate_second_axis = true;
        log::warn("classical_mds: second eigenvalue <= 0; emitting 1D embedding with y = 0");
        return result;
    }
    emit_axis(1, second);
    return result;
}

double kruskal_stress1(const DistanceMatrix& d, const std::vector<std::array<double, 2>>& coords) {
    const std::size_t n = d.size();
    if (coords.size() != n) throw Error("kruskal_stress1: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = coords[i][0] - coords[j][0];
            const double dy = coords[i][1] - coords[j][1];
            const double dij = std::sqrt(dx * dx + dy * dy);
            const double target = d.at(i, j);
            num += (dij - target) * (dij - target);
            den += target * target;
        }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

SemanticMap build_semantic_map(std::vector<UsagePoint> points,
                               std::vector<std::string> languages) {
    SemanticMap map;
    map.languages = std::move(languages);
    map.points = std::move(points);
    const DistanceMatrix d = hamming_matrix(map.points, map.languages);
    const MdsResult mds = classical_mds(d);
    map.coords = mds.coords;
    return map;
}

void write_map_tsv(const std::filesystem::path& path, const SemanticMap& map) {
    std::string out = "# point\tverse_id\tpivot_idx\tx\ty";
    for (const std::string& code : map.languages) out += "\t" + code;
    out += '\n';
    for (std::size_t i = 0; i < map.points.size(); ++i) {
        const UsagePoint& up = map.points[i];
        out += std::to_string(i);
        out += '\t';
        out += up.verse_id;
        out += '\t';
        out += std::to_string(up.pivot_idx);
        out += '\t';
        out += io::format_double(map.coords[i][0]);
        out += '\t';
        out += io::format_double(map.coords[i][1]);
        for (const std::string& code : map.languages) {
            out += '\t';
            out += up.labels.at(code);
        }
        out += '\n';
    }
    io::write_file(path, out);
}

SemanticMap load_map_tsv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = io::split_lines(io::read_file(path));
    if (lines.empty() || lines[0].empty() || lines[0][0] != '#')
        throw Error(path.string() + ": missing map header");
    std::vector<std::string> header = io::split(lines[0].substr(2), '\t');
    if (header.size() < 5) throw Error(path.string() + ": malformed map header");
    SemanticMap map;
    for (std::size_t c = 5; c < header.size(); ++c) map.languages.push_back(header[c]);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].empty()) continue;
        std::vector<std::string> cols = io::split(lines[k], '\t');
        if (cols.size() != header.size())
            throw Error(path.string() + ":" + std::to_string(k + 1) + ": wrong column count");
        UsagePoint up;
        up.verse_id = cols[1];
        up.pivot_idx = static_cast<int>(io::parse_int(cols[2]));
        for (std::size_t c = 5; c < cols.size(); ++c)
            up.labels.emplace(map.languages[c - 5], cols[c]);
        map.points.push_back(std::move(up));
        map.coords.push_back({io::parse_double(cols[3]), io::parse_double(cols[4])});
    }
    return map;
}

} // namespace typomap
