// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/processing.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "radint/common.hpp"

namespace radint {

namespace {

/// Batched in-place forward transforms. FFTW planning is not thread safe,
/// execution with the new-array interface is.
class FftPlans
{
  public:
    static FftPlans& instance()
    {
        static FftPlans plans;
        return plans;
    }

    // howmany transforms of length n; element stride `stride`, transform
    // distance `dist`.
    void forward(cdouble* data, int n, int howmany, int stride, int dist)
    {
        fftw_plan plan = get(n, howmany, stride, dist);
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(plan, p, p);
    }

    ~FftPlans()
    {
        for (auto& [key, plan] : plans_)
        {
            fftw_destroy_plan(plan);
        }
    }

  private:
    using Key = std::tuple<int, int, int, int>;

    fftw_plan get(int n, int howmany, int stride, int dist)
    {
        std::lock_guard lock(mutex_);
        const Key key{n, howmany, stride, dist};
        if (auto it = plans_.find(key); it != plans_.end())
        {
            return it->second;
        }
        const std::size_t total = static_cast<std::size_t>(n - 1) * stride +
                                  static_cast<std::size_t>(howmany - 1) * dist + 1;
        auto* scratch = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, scratch, nullptr, stride, dist,
                                            scratch, nullptr, stride, dist, FFTW_FORWARD,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (plan == nullptr)
        {
            throw DomainError(fmt::format("FFTW could not plan a length-{} transform", n));
        }
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

double median_of(std::vector<double>& v)
{
    const std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double hi = *mid;
    if (n % 2 == 1)
    {
        return hi;
    }
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

int wrap_index(int i, int n)
{
    const int m = i % n;
    return m < 0 ? m + n : m;
}

Detection make_detection(const RangeDopplerMap& map, int r, int d, double snr_db)
{
    Detection det;
    det.range_bin = r;
    det.doppler_bin = d;
    det.range = r * map.range_per_bin;
    const int signed_d = d < (map.n_doppler + 1) / 2 ? d : d - map.n_doppler;
    det.radial_speed = signed_d * map.speed_per_bin;
    det.snr_db = snr_db;
    return det;
}

}  // namespace

std::string_view to_string(WindowKind w)
{
    return w == WindowKind::rect ? "rect" : "hann";
}

WindowKind parse_window(std::string_view name)
{
    if (name == "rect")
    {
        return WindowKind::rect;
    }
    if (name == "hann")
    {
        return WindowKind::hann;
    }
    throw ConfigError(fmt::format("unknown window '{}'", name));
}

std::vector<double> make_window(WindowKind kind, int n)
{
    std::vector<double> w(static_cast<std::size_t>(n), 1.0);
    if (kind == WindowKind::hann && n > 1)
    {
        double energy = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double v = 0.5 * (1.0 - std::cos(kTwoPi * i / n));
            w[static_cast<std::size_t>(i)] = v;
            energy += v * v;
        }
        const double scale = std::sqrt(n / energy);
        for (auto& v : w)
        {
            v *= scale;
        }
    }
    return w;
}

RangeChirpMatrix range_fft(const IFCube& cube, WindowKind window)
{
    RangeChirpMatrix out;
    out.n_chirps = cube.n_chirps;
    out.n_range = cube.n_fast;
    out.data = cube.samples;
    if (cube.n_fast == 0 || cube.n_chirps == 0)
    {
        return out;
    }
    auto w = make_window(window, cube.n_fast);
    const double norm = 1.0 / std::sqrt(static_cast<double>(cube.n_fast));
    for (auto& v : w)
    {
        v *= norm;
    }
    for (int k = 0; k < cube.n_chirps; ++k)
    {
        cdouble* row = out.data.data() + static_cast<std::size_t>(k) * cube.n_fast;
        for (int m = 0; m < cube.n_fast; ++m)
        {
            row[m] *= w[static_cast<std::size_t>(m)];
        }
    }
    FftPlans::instance().forward(out.data.data(), cube.n_fast, cube.n_chirps, 1, cube.n_fast);
    return out;
}

RangeDopplerMap range_doppler(const IFCube& cube, WindowKind window)
{
    RangeChirpMatrix rc = range_fft(cube, window);
    RangeDopplerMap map;
    map.n_range = rc.n_range;
    map.n_doppler = rc.n_chirps;
    map.window = window;
    if (cube.n_fast > 0 && cube.n_chirps > 0)
    {
        map.range_per_bin = range_bin_width(cube.waveform);
        map.speed_per_bin = speed_bin_width(cube.waveform);
    }
    map.power.assign(static_cast<std::size_t>(map.n_range) * map.n_doppler, 0.0);
    if (map.power.empty())
    {
        return map;
    }
    // Transpose to [range][chirp] so each Doppler transform is contiguous.
    std::vector<cdouble> t(rc.data.size());
    auto w = make_window(window, rc.n_chirps);
    const double norm = 1.0 / std::sqrt(static_cast<double>(rc.n_chirps));
    for (int k = 0; k < rc.n_chirps; ++k)
    {
        const double wk = w[static_cast<std::size_t>(k)] * norm;
        for (int r = 0; r < rc.n_range; ++r)
        {
            t[static_cast<std::size_t>(r) * rc.n_chirps + k] = rc.at(k, r) * wk;
        }
    }
    FftPlans::instance().forward(t.data(), rc.n_chirps, rc.n_range, 1, rc.n_chirps);
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        map.power[i] = std::norm(t[i]);
    }
    return map;
}

PowerMatrix time_chirp_power(const IFCube& cube)
{
    PowerMatrix m{cube.n_chirps, cube.n_fast, {}};
    m.data.resize(cube.samples.size());
    std::transform(cube.samples.begin(), cube.samples.end(), m.data.begin(),
                   [](const cdouble& s) { return std::norm(s); });
    return m;
}

PowerMatrix range_chirp_power(const RangeChirpMatrix& rc)
{
    PowerMatrix m{rc.n_chirps, rc.n_range, {}};
    m.data.resize(rc.data.size());
    std::transform(rc.data.begin(), rc.data.end(), m.data.begin(),
                   [](const cdouble& s) { return std::norm(s); });
    return m;
}

PowerMatrix to_matrix(const RangeDopplerMap& map)
{
    return {map.n_range, map.n_doppler, map.power};
}

double range_bin_width(const WaveformConfig& w)
{
    // Bin spacing fs / n_fast in beat frequency; beat = 2 R slope / c.
    return kSpeedOfLight * w.adc_rate / (2.0 * w.slope * w.n_fast());
}

double speed_bin_width(const WaveformConfig& w)
{
    return kSpeedOfLight / (2.0 * w.carrier * w.pri * w.n_chirps);
}

double bin_to_range(const WaveformConfig& w, double bin)
{
    return bin * range_bin_width(w);
}

double range_to_bin(const WaveformConfig& w, double range)
{
    return range / range_bin_width(w);
}

double speed_to_doppler_bin(const WaveformConfig& w, double radial_speed)
{
    const double bin = radial_speed / speed_bin_width(w);
    const double n = w.n_chirps;
    const double m = std::fmod(bin, n);
    return m < 0.0 ? m + n : m;
}

double doppler_bin_to_speed(const WaveformConfig& w, int bin)
{
    const int n = w.n_chirps;
    const int b = wrap_index(bin, n);
    const int signed_b = b < (n + 1) / 2 ? b : b - n;
    return signed_b * speed_bin_width(w);
}

double noise_floor(const RangeDopplerMap& map, std::span<const Cell> exclusion)
{
    std::vector<char> skip(map.power.size(), 0);
    for (const auto& c : exclusion)
    {
        if (c.range_bin >= 0 && c.range_bin < map.n_range && map.n_doppler > 0)
        {
            const int d = wrap_index(c.doppler_bin, map.n_doppler);
            skip[static_cast<std::size_t>(c.range_bin) * map.n_doppler + d] = 1;
        }
    }
    std::vector<double> v;
    v.reserve(map.power.size());
    for (std::size_t i = 0; i < map.power.size(); ++i)
    {
        if (!skip[i])
        {
            v.push_back(map.power[i]);
        }
    }
    if (v.empty())
    {
        throw DomainError("noise_floor: every cell is excluded");
    }
    return linear_to_db(median_of(v));
}

void CfarParams::validate() const
{
    if (train < 4)
    {
        throw ConfigError(fmt::format("CFAR train must be >= 4 (got {})", train));
    }
    if (guard < 0)
    {
        throw ConfigError(fmt::format("CFAR guard must be >= 0 (got {})", guard));
    }
    if (!(pfa > 0.0 && pfa < 1.0))
    {
        throw ConfigError(fmt::format("CFAR pfa must lie in (0, 1) (got {})", pfa));
    }
}

double cfar_alpha(int n_train, double pfa)
{
    return n_train * (std::pow(pfa, -1.0 / n_train) - 1.0);
}

std::vector<double> bin_correlation(WindowKind kind, int n, int max_lag)
{
    std::vector<double> rho(static_cast<std::size_t>(max_lag + 1), 0.0);
    if (n <= 0)
    {
        return rho;
    }
    const auto w = make_window(kind, n);
    double energy = 0.0;
    for (double v : w)
    {
        energy += v * v;
    }
    // The window is symmetric about n/2, so the sine part vanishes.
    for (int k = 0; k <= max_lag; ++k)
    {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
        {
            acc += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)] *
                   std::cos(kTwoPi * static_cast<double>(k) * i / n);
        }
        rho[static_cast<std::size_t>(k)] = acc / energy;
    }
    return rho;
}

namespace {

// log det(I + s C) for the Toeplitz correlation matrix of one run, by Cholesky.
double log_det_run(const TrainingRun& run, double s)
{
    const int n = run.length;
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            const auto lag = static_cast<std::size_t>(std::abs(i - j));
            const double c = lag < run.rho.size() ? run.rho[lag] : 0.0;
            a[static_cast<std::size_t>(i) * n + j] = (i == j ? 1.0 : 0.0) + s * c;
        }
    }
    double log_det = 0.0;
    for (int j = 0; j < n; ++j)
    {
        double d = a[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k)
        {
            d -= a[static_cast<std::size_t>(j) * n + k] * a[static_cast<std::size_t>(j) * n + k];
        }
        if (!(d > 0.0))
        {
            throw DomainError("training correlation is not positive semi-definite");
        }
        const double l = std::sqrt(d);
        a[static_cast<std::size_t>(j) * n + j] = l;
        for (int i = j + 1; i < n; ++i)
        {
            double v = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
            {
                v -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
            }
            a[static_cast<std::size_t>(i) * n + j] = v / l;
        }
        log_det += 2.0 * std::log(l);
    }
    return log_det;
}

}  // namespace

double cfar_alpha(std::span<const TrainingRun> runs, double pfa)
{
    int n = 0;
    for (const auto& r : runs)
    {
        n += r.length;
    }
    if (n <= 0 || !(pfa > 0.0) || !(pfa < 1.0))
    {
        throw DomainError("cfar_alpha needs training cells and 0 < pfa < 1");
    }
    const double target = -std::log(pfa);
    auto excess = [&](double alpha) {
        double v = 0.0;
        for (const auto& r : runs)
        {
            if (r.length > 0)
            {
                v += log_det_run(r, alpha / n);
            }
        }
        return v - target;
    };
    // Monotone in alpha; bracket, then bisect.
    double lo = 0.0;
    double hi = cfar_alpha(n, pfa);
    while (excess(hi) < 0.0)
    {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<Detection> ca_cfar(const RangeDopplerMap& map, const CfarParams& params)
{
    params.validate();
    const int nr = map.n_range;
    const int nd = map.n_doppler;
    const int g = params.guard;
    const int t = params.train;
    if (nd < 2 * (g + t) + 1)
    {
        throw ConfigError(fmt::format("CFAR window {} exceeds {} Doppler bins", 2 * (g + t) + 1, nd));
    }
    std::vector<Detection> out;
    if (nr == 0)
    {
        return out;
    }

    // Prefix sums along range, per Doppler column: col[r * nd + d] = sum_{i<r}.
    std::vector<double> col(static_cast<std::size_t>(nr + 1) * nd, 0.0);
    for (int r = 0; r < nr; ++r)
    {
        for (int d = 0; d < nd; ++d)
        {
            col[static_cast<std::size_t>(r + 1) * nd + d] =
                col[static_cast<std::size_t>(r) * nd + d] + map.at(r, d);
        }
    }
    auto range_sum = [&](int d, int lo, int hi) {  // [lo, hi) clipped
        lo = std::max(lo, 0);
        hi = std::min(hi, nr);
        if (hi <= lo)
        {
            return std::pair{0.0, 0};
        }
        return std::pair{col[static_cast<std::size_t>(hi) * nd + d] -
                             col[static_cast<std::size_t>(lo) * nd + d],
                         hi - lo};
    };

    std::vector<double> row(static_cast<std::size_t>(2 * nd + 1), 0.0);
    const auto rho_d = bin_correlation(map.window, nd, t);
    const auto rho_r = bin_correlation(map.window, nr, t);
    // Keyed by the range cells present below and above the cell under test.
    std::vector<double> alpha_cache(static_cast<std::size_t>((t + 1) * (t + 1)), -1.0);
    for (int r = 0; r < nr; ++r)
    {
        // Doubled prefix over the row so wrapped windows are one difference.
        for (int i = 0; i < 2 * nd; ++i)
        {
            row[static_cast<std::size_t>(i + 1)] = row[static_cast<std::size_t>(i)] + map.at(r, i % nd);
        }
        for (int d = 0; d < nd; ++d)
        {
            auto dsum = [&](int lo) {  // t cells starting at lo (may be negative)
                const int s = lo < 0 ? lo + nd : lo;
                return row[static_cast<std::size_t>(s + t)] - row[static_cast<std::size_t>(s)];
            };
            const double doppler = dsum(d - g - t) + dsum(d + g + 1);
            const auto [below, n_below] = range_sum(d, r - g - t, r - g);
            const auto [above, n_above] = range_sum(d, r + g + 1, r + g + 1 + t);
            const int n = 2 * t + n_below + n_above;
            double& alpha = alpha_cache[static_cast<std::size_t>(n_below * (t + 1) + n_above)];
            if (alpha < 0.0)
            {
                const TrainingRun runs[] = {{t, rho_d}, {t, rho_d}, {n_below, rho_r}, {n_above, rho_r}};
                alpha = cfar_alpha(runs, params.pfa);
            }
            const double mean = (doppler + below + above) / n;
            const double p = map.at(r, d);
            if (p > alpha * mean)
            {
                out.push_back(make_detection(map, r, d, linear_to_db(p / mean)));
            }
        }
    }
    return out;
}

std::vector<Detection> fixed_threshold(const RangeDopplerMap& map, double nominal_floor,
                                       double threshold_db)
{
    std::vector<Detection> out;
    const double level = nominal_floor * db_to_linear(threshold_db);
    for (int r = 0; r < map.n_range; ++r)
    {
        for (int d = 0; d < map.n_doppler; ++d)
        {
            const double p = map.at(r, d);
            if (p > level)
            {
                out.push_back(make_detection(map, r, d, linear_to_db(p / nominal_floor)));
            }
        }
    }
    return out;
}

double mean_power(const RangeDopplerMap& map)
{
    if (map.power.empty())
    {
        throw DomainError("mean_power of an empty map");
    }
    // Kahan summation.
    double sum = 0.0;
    double c = 0.0;
    for (double p : map.power)
    {
        const double y = p - c;
        const double s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    return sum / static_cast<double>(map.power.size());
}

std::vector<Detection> cluster_detections(const RangeDopplerMap& map,
                                          std::span<const Detection> detections)
{
    const int nd = map.n_doppler;
    std::map<std::pair<int, int>, std::size_t> index;
    for (std::size_t i = 0; i < detections.size(); ++i)
    {
        index.emplace(std::pair{detections[i].range_bin, detections[i].doppler_bin}, i);
    }
    std::vector<char> seen(detections.size(), 0);
    std::vector<Detection> out;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < detections.size(); ++i)
    {
        if (seen[i])
        {
            continue;
        }
        seen[i] = 1;
        stack.assign(1, i);
        std::size_t best = i;
        while (!stack.empty())
        {
            const std::size_t cur = stack.back();
            stack.pop_back();
            const auto& c = detections[cur];
            if (map.at(c.range_bin, c.doppler_bin) > map.at(detections[best].range_bin,
                                                            detections[best].doppler_bin))
            {
                best = cur;
            }
            for (int dr = -1; dr <= 1; ++dr)
            {
                for (int dd = -1; dd <= 1; ++dd)
                {
                    if (dr == 0 && dd == 0)
                    {
                        continue;
                    }
                    auto it = index.find({c.range_bin + dr, wrap_index(c.doppler_bin + dd, nd)});
                    if (it != index.end() && !seen[it->second])
                    {
                        seen[it->second] = 1;
                        stack.push_back(it->second);
                    }
                }
            }
        }
        out.push_back(detections[best]);
    }
    return out;
}

bool target_detected(std::span<const Detection> detections, int n_doppler, Cell truth, int gate)
{
    for (const auto& d : detections)
    {
        if (std::abs(d.range_bin - truth.range_bin) > gate)
        {
            continue;
        }
        const int dd = wrap_index(d.doppler_bin - truth.doppler_bin, n_doppler);
        if (std::min(dd, n_doppler - dd) <= gate)
        {
            return true;
        }
    }
    return false;
}

std::vector<int> excess_rows(const PowerMatrix& m, LineStatistic stat, double threshold_db)
{
    std::vector<double> level(static_cast<std::size_t>(m.rows), 0.0);
    std::vector<double> line(static_cast<std::size_t>(m.cols));
    for (int r = 0; r < m.rows; ++r)
    {
        const auto* first = m.data.data() + static_cast<std::size_t>(r) * m.cols;
        std::copy(first, first + m.cols, line.begin());
        if (stat == LineStatistic::mean)
        {
            double s = 0.0;
            for (double v : line)
            {
                s += v;
            }
            level[static_cast<std::size_t>(r)] = m.cols > 0 ? s / m.cols : 0.0;
        }
        else
        {
            level[static_cast<std::size_t>(r)] = m.cols > 0 ? median_of(line) : 0.0;
        }
    }
    std::vector<int> out;
    if (level.empty())
    {
        return out;
    }
    std::vector<double> tmp = level;
    const double ref = median_of(tmp) * db_to_linear(threshold_db);
    for (int r = 0; r < m.rows; ++r)
    {
        if (level[static_cast<std::size_t>(r)] > ref)
        {
            out.push_back(r);
        }
    }
    return out;
}

LineSpread line_spread(const PowerMatrix& m)
{
    auto variance_db = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v)
        {
            mean += linear_to_db(std::max(x, 1e-300));
        }
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v)
        {
            const double e = linear_to_db(std::max(x, 1e-300)) - mean;
            var += e * e;
        }
        return var / static_cast<double>(v.size());
    };
    std::vector<double> rows(static_cast<std::size_t>(m.rows), 0.0);
    std::vector<double> cols(static_cast<std::size_t>(m.cols), 0.0);
    for (int r = 0; r < m.rows; ++r)
    {
        for (int c = 0; c < m.cols; ++c)
        {
            rows[static_cast<std::size_t>(r)] += m.at(r, c) / m.cols;
            cols[static_cast<std::size_t>(c)] += m.at(r, c) / m.rows;
        }
    }
    LineSpread s;
    if (m.rows > 0 && m.cols > 0)
    {
        s.row_variance = variance_db(rows);
        s.col_variance = variance_db(cols);
    }
    return s;
}

}  // namespace radint
