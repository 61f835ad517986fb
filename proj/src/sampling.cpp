#include "semibiv/sampling.hpp"

#include "semibiv/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

namespace semibiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum Stream : std::uint64_t { kLatent = 1, kBranch = 2, kSingular = 3, kContinuous = 4 };

// Runs body(shard, begin, end) for every shard, spread over worker threads.
template <class Body>
void for_each_shard(std::size_t n, const SamplingOptions& options, Body&& body) {
    const std::size_t shard = std::max<std::size_t>(1, options.shard_size);
    const std::size_t shards = (n + shard - 1) / shard;
    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(shards)));

    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned t) {
        try {
            for (std::size_t s = t; s < shards; s += threads) {
                body(s, s * shard, std::min(n, (s + 1) * shard));
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void require_count(std::size_t n) {
    if (n < 1) throw DomainError("sample size must be at least 1");
}

// Piecewise-constant bound on alpha f_a over both wedges in the compact
// coordinates u = w / (1 + w), v = s / (1 + s).
class Envelope {
public:
    Envelope(const GeneralBivariateModel& model, const GridSpec& grid) : model_(model) {
        std::vector<double> breaks{0.0};
        for (double k : grid.knots) {
            const double r = model.baseline().cumulative_hazard(k);
            if (r > 0.0 && std::isfinite(r)) breaks.push_back(r / (1.0 + r));
        }
        breaks.push_back(1.0);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        breaks_ = breaks;

        const std::size_t m = breaks_.size() - 1;
        double total = 0.0;
        for (int wedge = 0; wedge < 2; ++wedge) {
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t c = 0; c < m; ++c) {
                    Cell cell{wedge, breaks_[a], breaks_[a + 1], breaks_[c], breaks_[c + 1], 0.0};
                    double peak = 0.0;
                    constexpr int kLattice = 5;
                    for (int p = 0; p < kLattice; ++p) {
                        for (int q = 0; q < kLattice; ++q) {
                            const double u = cell.u0 + (cell.u1 - cell.u0) * p / (kLattice - 1);
                            const double v = cell.v0 + (cell.v1 - cell.v0) * q / (kLattice - 1);
                            peak = std::max(peak, density(wedge, u, v));
                        }
                    }
                    cell.height = 1.2 * peak;
                    total += cell.height * (cell.u1 - cell.u0) * (cell.v1 - cell.v0);
                    cumulative_.push_back(total);
                    cells_.push_back(cell);
                }
            }
        }
        total_ = total;
    }

    double total() const { return total_; }

    // alpha f_a as a density in (wedge, u, v).
    double density(int wedge, double u, double v) const {
        if (u >= 1.0 || v >= 1.0) return 0.0;
        const double cu = 1.0 - u;
        const double cv = 1.0 - v;
        const double value = ac_density_transformed(
            model_, wedge == 0 ? Wedge::FirstLarger : Wedge::SecondLarger, u / cu, v / cv);
        if (value <= 0.0 || !std::isfinite(value)) return 0.0;
        return value / (cu * cu * cv * cv);
    }

    // One proposal; returns true and fills the pair when accepted.
    bool propose(CounterRng& rng, SamplePair& out) const {
        const double pick = rng.uniform() * total_;
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
        const Cell& cell = cells_[std::min<std::size_t>(it - cumulative_.begin(), cells_.size() - 1)];
        const double u = cell.u0 + (cell.u1 - cell.u0) * rng.uniform();
        const double v = cell.v0 + (cell.v1 - cell.v0) * rng.uniform();
        const double accept = rng.uniform() * cell.height;
        if (accept >= density(cell.wedge, u, v)) return false;

        const auto& b = model_.baseline();
        const double w = u / (1.0 - u);
        const double s = v / (1.0 - v);
        const double lo = b.inverse_cumulative_hazard(w);
        const double hi = b.inverse_cumulative_hazard(w + s);
        if (!(hi > lo)) return false;  // gap lost to rounding; resample
        out = cell.wedge == 0 ? SamplePair{hi, lo, false} : SamplePair{lo, hi, false};
        return true;
    }

private:
    struct Cell {
        int wedge;
        double u0, u1, v0, v1;
        double height;
    };

    const GeneralBivariateModel& model_;
    std::vector<double> breaks_;
    std::vector<Cell> cells_;
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

void count_ties(SampleBatch& batch) {
    batch.tie_count = static_cast<std::size_t>(
        std::count_if(batch.pairs.begin(), batch.pairs.end(),
                      [](const SamplePair& p) { return p.x1 == p.x2; }));
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t shard, std::uint64_t stream)
    : state_(splitmix(splitmix(seed) ^ splitmix(shard + 0x632be59bd9b4e019ULL) ^
                      splitmix(stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL))) {}

std::uint64_t CounterRng::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix(state_);
}

double CounterRng::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::exponential() { return -std::log(uniform()); }

SampleBatch sample_ph(const PHBivariateModel& model, std::size_t n, std::uint64_t seed,
                      const SamplingOptions& options) {
    require_count(n);
    SampleBatch batch;
    batch.seed = seed;
    batch.n = n;
    batch.pairs.resize(n);
    const auto& b = model.baseline();
    const double t1 = model.theta1();
    const double t2 = model.theta2();
    const double t3 = model.theta3();

    for_each_shard(n, options, [&](std::size_t shard, std::size_t begin, std::size_t end) {
        CounterRng rng(seed, shard, kLatent);
        for (std::size_t k = begin; k < end; ++k) {
            const double z1 = rng.exponential() / t1;
            const double z2 = rng.exponential() / t2;
            const double e3 = rng.exponential();
            const double z3 = t3 > 0.0 ? e3 / t3 : kInf;
            const double y1 = std::min(z1, z3);
            const double y2 = std::min(z2, z3);
            const double x1 = b.inverse_cumulative_hazard(y1);
            const double x2 = y1 == y2 ? x1 : b.inverse_cumulative_hazard(y2);
            batch.pairs[k] = {x1, x2, z3 <= z1 && z3 <= z2};
        }
    });
    count_ties(batch);
    return batch;
}

SampleBatch sample_general(const GeneralBivariateModel& model, std::size_t n, std::uint64_t seed,
                           const SamplingOptions& options, const std::optional<GridSpec>& grid) {
    require_count(n);
    const Decomposition parts = decompose(model);
    if (!(parts.alpha >= -1e-12 && parts.alpha <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "cannot sample: mixture weight alpha = " << parts.alpha << " is outside [0, 1]";
        throw ModelError(msg.str());
    }
    const double alpha = std::clamp(parts.alpha, 0.0, 1.0);
    const auto& b = model.baseline();
    const double theta = model.theta();

    std::optional<Envelope> envelope;
    if (alpha > 0.0) {
        envelope.emplace(model, grid ? *grid : GridSpec::log_spaced(b));
        const double rate = envelope->total() > 0.0 ? alpha / envelope->total() : 0.0;
        if (!(rate >= 1e-3)) {
            std::ostringstream msg;
            msg << "rejection envelope acceptance rate " << rate
                << " is below 0.1%; refine the grid";
            throw SamplerError(msg.str());
        }
    }

    SampleBatch batch;
    batch.seed = seed;
    batch.n = n;
    batch.pairs.resize(n);
    const std::size_t shard_size = std::max<std::size_t>(1, options.shard_size);
    const std::size_t shards = (n + shard_size - 1) / shard_size;
    std::vector<std::size_t> proposals(shards, 0);

    for_each_shard(n, options, [&](std::size_t shard, std::size_t begin, std::size_t end) {
        CounterRng branch(seed, shard, kBranch);
        CounterRng singular(seed, shard, kSingular);
        CounterRng continuous(seed, shard, kContinuous);
        for (std::size_t k = begin; k < end; ++k) {
            if (branch.uniform() >= alpha) {
                const double t = b.inverse_cumulative_hazard(singular.exponential() / theta);
                batch.pairs[k] = {t, t, true};
                continue;
            }
            SamplePair pair;
            std::size_t tries = 0;
            do {
                if (++tries > 1000000) {
                    throw SamplerError("rejection sampler made no progress; refine the grid");
                }
            } while (!envelope->propose(continuous, pair));
            proposals[shard] += tries;
            batch.pairs[k] = pair;
        }
    });

    for (std::size_t p : proposals) batch.proposals += p;
    batch.accepted = static_cast<std::size_t>(std::count_if(
        batch.pairs.begin(), batch.pairs.end(), [](const SamplePair& p) { return !p.tied; }));
    count_ties(batch);
    return batch;
}

void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
    out << "x1,x2,tied\n";
    char buf[64];
    for (const auto& p : batch.pairs) {
        auto r = std::to_chars(buf, buf + sizeof buf, p.x1);
        out.write(buf, r.ptr - buf);
        out << ',';
        r = std::to_chars(buf, buf + sizeof buf, p.x2);
        out.write(buf, r.ptr - buf);
        out << ',' << (p.tied ? '1' : '0') << '\n';
    }
}

}  // namespace semibiv
