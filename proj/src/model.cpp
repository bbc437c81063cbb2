#include "wismc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace wismc {

namespace {
constexpr double kRowSumTol = 1e-12;
constexpr double kCdfTol = 1e-9;
}  // namespace

// ---- IndexConfig ------------------------------------------------------------

void IndexConfig::validate() const {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw ModelError("lambda must lie in (0, 1], got " + std::to_string(lambda));
    if (memory && *memory < 1)
        throw ModelError("memory must be >= 1 transitions, got " + std::to_string(*memory));
    if (!(initial_index >= 0.0) || !std::isfinite(initial_index))
        throw ModelError("initial index must be finite and non-negative");
}

// ---- StateSpace --------------------------------------------------------------

StateSpace::StateSpace(std::vector<double> representative_values, std::vector<std::string> labels)
    : reps_(std::move(representative_values)), labels_(std::move(labels)) {
    if (reps_.size() < 2) throw ModelError("state space needs at least 2 states");
    for (std::size_t k = 1; k < reps_.size(); ++k) {
        if (!(reps_[k] > reps_[k - 1]))
            throw ModelError("representative values must be strictly increasing");
    }
    if (labels_.empty()) {
        labels_.reserve(reps_.size());
        for (std::size_t k = 0; k < reps_.size(); ++k) labels_.push_back(std::to_string(k + 1));
    }
    if (labels_.size() != reps_.size())
        throw ModelError("label count does not match state count");
    for (std::size_t a = 0; a < labels_.size(); ++a)
        for (std::size_t b = a + 1; b < labels_.size(); ++b)
            if (labels_[a] == labels_[b]) throw ModelError("state labels must be distinct");
}

std::vector<double> StateSpace::squared_reps() const {
    std::vector<double> sq(reps_.size());
    for (std::size_t k = 0; k < reps_.size(); ++k) sq[k] = reps_[k] * reps_[k];
    return sq;
}

// ---- IndexLevels --------------------------------------------------------------

IndexLevels::IndexLevels() = default;

IndexLevels::IndexLevels(int count, std::vector<double> edges)
    : count_(count), edges_(std::move(edges)) {
    if (count_ < 1) throw ModelError("level count must be positive");
    if (edges_.size() + 1 != static_cast<std::size_t>(count_))
        throw ModelError("level edges must number count - 1");
    for (std::size_t k = 1; k < edges_.size(); ++k)
        if (!(edges_[k] > edges_[k - 1])) throw ModelError("level edges must be strictly increasing");
}

Level IndexLevels::level_of(double v) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), v);
    return static_cast<Level>(it - edges_.begin()) + 1;
}

// ---- Trajectory ---------------------------------------------------------------

void Trajectory::validate(int state_count) const {
    if (states.empty()) throw EmptyTrajectory();
    if (times.size() != states.size())
        throw ModelError("trajectory state/time lengths differ");
    if (!index_values.empty() && index_values.size() != states.size())
        throw ModelError("trajectory index length differs from state length");
    if (times.front() != 0) throw ModelError("trajectory must start at time 0");
    for (std::size_t n = 0; n < states.size(); ++n) {
        if (states[n] < 1 || states[n] > state_count) throw UnknownState(states[n]);
        if (n > 0) {
            if (times[n] <= times[n - 1]) throw ModelError("transition times must strictly increase");
            if (states[n] == states[n - 1])
                throw ModelError("self-transition in embedded chain at step " + std::to_string(n));
        }
    }
    for (double u : index_values)
        if (!(u >= 0.0) || !std::isfinite(u)) throw ModelError("index values must be finite and >= 0");
}

// ---- DiscreteCdf ---------------------------------------------------------------

DiscreteCdf DiscreteCdf::from_counts(std::vector<Minute> support, std::vector<std::int64_t> counts) {
    DiscreteCdf d;
    d.support_ = std::move(support);
    d.counts_ = std::move(counts);
    if (d.support_.size() != d.counts_.size() || d.support_.empty())
        throw ModelError("sojourn histogram support/count size mismatch");
    std::int64_t total = 0;
    for (std::int64_t c : d.counts_) {
        if (c <= 0) throw ModelError("sojourn histogram counts must be positive");
        total += c;
    }
    d.cdf_.resize(d.support_.size());
    std::int64_t running = 0;
    for (std::size_t k = 0; k < d.counts_.size(); ++k) {
        running += d.counts_[k];
        d.cdf_[k] = static_cast<double>(running) / static_cast<double>(total);
    }
    d.cdf_.back() = 1.0;
    d.validate();
    return d;
}

DiscreteCdf DiscreteCdf::from_cdf(std::vector<Minute> support, std::vector<double> cdf) {
    DiscreteCdf d;
    d.support_ = std::move(support);
    d.cdf_ = std::move(cdf);
    d.validate();
    return d;
}

void DiscreteCdf::validate() const {
    if (support_.empty() || support_.size() != cdf_.size())
        throw ModelError("sojourn CDF support/value size mismatch");
    if (support_.front() < 1) throw ModelError("sojourn times must be >= 1");
    for (std::size_t k = 0; k < support_.size(); ++k) {
        if (k > 0 && support_[k] <= support_[k - 1])
            throw ModelError("sojourn CDF support must strictly increase");
        double prev = k == 0 ? 0.0 : cdf_[k - 1];
        if (!(cdf_[k] >= prev - kCdfTol)) throw ModelError("sojourn CDF must be non-decreasing");
        if (cdf_[k] < 0.0 || cdf_[k] > 1.0 + kCdfTol) throw ModelError("sojourn CDF out of [0, 1]");
    }
    if (std::abs(cdf_.back() - 1.0) > kCdfTol)
        throw ModelError("sojourn CDF must reach 1 at the end of its support");
}

double DiscreteCdf::at(Minute t) const {
    // F(t) = value at the largest support point <= t.
    auto it = std::upper_bound(support_.begin(), support_.end(), t);
    if (it == support_.begin()) return 0.0;
    return cdf_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

Minute DiscreteCdf::sample(double u) const {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;  // u numerically above the final 1.0
    return support_[static_cast<std::size_t>(it - cdf_.begin())];
}

std::int64_t DiscreteCdf::total_count() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

// ---- WismcModel ----------------------------------------------------------------

WismcModel::WismcModel(StateSpace space, IndexLevels levels, IndexConfig index_config,
                       std::vector<KernelCell> cells, std::vector<double> return_edges)
    : space_(std::move(space)),
      levels_(std::move(levels)),
      index_config_(index_config),
      cells_(std::move(cells)),
      return_edges_(std::move(return_edges)) {
    const std::size_t expected =
        static_cast<std::size_t>(space_.size()) * static_cast<std::size_t>(levels_.count());
    if (cells_.size() != expected)
        throw ModelError("kernel cell table size mismatch");
    for (auto& cell : cells_) {
        if (!cell.populated()) continue;
        cell.cum_p.resize(cell.p.size());
        double running = 0.0;
        for (std::size_t j = 0; j < cell.p.size(); ++j) {
            running += cell.p[j];
            cell.cum_p[j] = running;
        }
        // Guard inverse-CDF draws with u ~ 1 against a row sum a few ulps
        // under 1: the final cumulative value is pinned to 1.
        cell.cum_p.back() = 1.0;
    }
    validate();
}

const KernelCell& WismcModel::cell(State i, Level v) const {
    space_.require_state(i);
    levels_.require_level(v);
    return cells_[cell_index(i, v)];
}

const KernelCell* WismcModel::resolve_cell(State i, Level v, Level* used) const {
    space_.require_state(i);
    levels_.require_level(v);
    const KernelCell& direct = cells_[cell_index(i, v)];
    if (direct.populated()) {
        if (used) *used = v;
        return &direct;
    }
    for (int d = 1; d < levels_.count(); ++d) {
        if (v - d >= 1) {
            const KernelCell& c = cells_[cell_index(i, v - d)];
            if (c.populated()) {
                if (used) *used = v - d;
                return &c;
            }
        }
        if (v + d <= levels_.count()) {
            const KernelCell& c = cells_[cell_index(i, v + d)];
            if (c.populated()) {
                if (used) *used = v + d;
                return &c;
            }
        }
    }
    return nullptr;
}

double WismcModel::transition_prob(State i, Level v, State j) const {
    space_.require_state(j);
    const KernelCell& c = cell(i, v);
    if (!c.populated()) return 0.0;
    return c.p[static_cast<std::size_t>(j - 1)];
}

double WismcModel::sojourn_cdf(State i, State j, Level v, Minute t) const {
    space_.require_state(j);
    const KernelCell& c = cell(i, v);
    if (!c.populated()) return 1.0;  // p == 0 everywhere in the cell
    const std::size_t jj = static_cast<std::size_t>(j - 1);
    if (c.p[jj] == 0.0) return 1.0;
    return c.sojourn[jj].at(t);
}

double WismcModel::sojourn_marginal(State i, Level v, Minute t) const {
    const KernelCell& c = cell(i, v);
    if (!c.populated()) throw MissingCell(i, v);
    double h = 0.0;
    for (std::size_t j = 0; j < c.p.size(); ++j) {
        if (c.p[j] == 0.0) continue;
        h += c.p[j] * c.sojourn[j].at(t);
    }
    return h;
}

double WismcModel::kernel(State i, State j, Level v, Minute t) const {
    space_.require_state(j);
    const KernelCell& c = cell(i, v);
    if (!c.populated()) return 0.0;
    const std::size_t jj = static_cast<std::size_t>(j - 1);
    if (c.p[jj] == 0.0) return 0.0;
    return c.p[jj] * c.sojourn[jj].at(t);
}

std::vector<std::vector<std::int64_t>> WismcModel::occupancy() const {
    std::vector<std::vector<std::int64_t>> occ(
        static_cast<std::size_t>(space_.size()),
        std::vector<std::int64_t>(static_cast<std::size_t>(levels_.count()), 0));
    for (State i = 1; i <= space_.size(); ++i)
        for (Level v = 1; v <= levels_.count(); ++v)
            occ[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(v - 1)] =
                cells_[cell_index(i, v)].count;
    return occ;
}

void WismcModel::validate() const {
    index_config_.validate();
    const std::size_t s = static_cast<std::size_t>(space_.size());
    for (State i = 1; i <= space_.size(); ++i) {
        for (Level v = 1; v <= levels_.count(); ++v) {
            const KernelCell& c = cells_[cell_index(i, v)];
            if (!c.populated()) {
                if (c.count != 0)
                    throw ModelError("unpopulated cell carries a nonzero count");
                continue;
            }
            if (c.p.size() != s || c.sojourn.size() != s)
                throw ModelError("kernel cell row size mismatch");
            double sum = 0.0;
            for (std::size_t j = 0; j < s; ++j) {
                const double pj = c.p[j];
                if (!(pj >= 0.0) || pj > 1.0 + kRowSumTol)
                    throw ModelError("transition probability out of [0, 1]");
                sum += pj;
                if (static_cast<State>(j + 1) == i && pj != 0.0)
                    throw ModelError("self-transition probability must be zero");
                if (pj > 0.0) {
                    if (c.sojourn[j].empty())
                        throw ModelError("missing sojourn distribution for a positive-probability target");
                    c.sojourn[j].validate();
                }
            }
            if (std::abs(sum - 1.0) > kRowSumTol)
                throw ModelError("transition row does not sum to 1");
        }
    }
    if (!return_edges_.empty()) {
        if (return_edges_.size() + 1 != s) throw ModelError("return edge count mismatch");
        for (std::size_t k = 1; k < return_edges_.size(); ++k)
            if (!(return_edges_[k] > return_edges_[k - 1]))
                throw ModelError("return edges must strictly increase");
    }
}

WismcModel collapse_levels(const WismcModel& model) {
    const int s = model.states().size();
    std::vector<KernelCell> collapsed(static_cast<std::size_t>(s));
    for (State i = 1; i <= s; ++i) {
        // Merge the per-level sojourn histograms target by target.
        std::vector<std::map<Minute, std::int64_t>> hist(static_cast<std::size_t>(s));
        std::int64_t total = 0;
        for (Level v = 1; v <= model.levels().count(); ++v) {
            const KernelCell& c = model.cell(i, v);
            if (!c.populated()) continue;
            for (std::size_t j = 0; j < c.p.size(); ++j) {
                if (c.p[j] == 0.0) continue;
                if (!c.sojourn[j].count_backed())
                    throw ModelError("collapse over levels requires count-backed cells");
                const auto& sup = c.sojourn[j].support();
                const auto& cnt = c.sojourn[j].counts();
                for (std::size_t k = 0; k < sup.size(); ++k) hist[j][sup[k]] += cnt[k];
            }
            total += c.count;
        }
        if (total == 0) continue;
        KernelCell& out = collapsed[static_cast<std::size_t>(i - 1)];
        out.p.assign(static_cast<std::size_t>(s), 0.0);
        out.sojourn.resize(static_cast<std::size_t>(s));
        out.count = total;
        for (std::size_t j = 0; j < hist.size(); ++j) {
            if (hist[j].empty()) continue;
            std::vector<Minute> sup;
            std::vector<std::int64_t> cnt;
            std::int64_t nj = 0;
            for (auto& [w, c] : hist[j]) {
                sup.push_back(w);
                cnt.push_back(c);
                nj += c;
            }
            out.p[j] = static_cast<double>(nj) / static_cast<double>(total);
            out.sojourn[j] = DiscreteCdf::from_counts(std::move(sup), std::move(cnt));
        }
    }
    return WismcModel(model.states(), IndexLevels(), model.index_config(), std::move(collapsed),
                      model.return_edges());
}

}  // namespace wismc
