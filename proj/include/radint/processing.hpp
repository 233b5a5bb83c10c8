// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <span>
#include <vector>

#include "radint/synthesis.hpp"

namespace radint {

enum class WindowKind
{
    rect,
    hann
};

std::string_view to_string(WindowKind w);
WindowKind parse_window(std::string_view name);

/// Window coefficients scaled so that sum(w^2) == n.
std::vector<double> make_window(WindowKind kind, int n);

/// Real matrix, row-major; row index first.
struct PowerMatrix
{
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// Complex matrix after the range FFT, [chirp][range bin].
struct RangeChirpMatrix
{
    int n_chirps = 0;
    int n_range = 0;
    std::vector<cdouble> data;

    const cdouble& at(int chirp, int bin) const
    {
        return data[static_cast<std::size_t>(chirp) * n_range + bin];
    }
};

/// Power per (range bin, Doppler bin), stored [range][doppler]. All n_fast
/// range bins are kept (complex sampling, passband [0, fs]). Doppler bins are
/// in FFT order: bin d covers normalized frequency d / n_doppler.
struct RangeDopplerMap
{
    int n_range = 0;
    int n_doppler = 0;
    std::vector<double> power;
    double range_per_bin = 0.0;  // m
    double speed_per_bin = 0.0;  // m/s
    WindowKind window = WindowKind::rect;  // sets the noise correlation between neighbouring bins

    double& at(int r, int d) { return power[static_cast<std::size_t>(r) * n_doppler + d]; }
    double at(int r, int d) const { return power[static_cast<std::size_t>(r) * n_doppler + d]; }
};

struct Detection
{
    int range_bin = 0;
    int doppler_bin = 0;
    double range = 0.0;         // m
    double radial_speed = 0.0;  // m/s
    double snr_db = 0.0;
};

/// Windowed range FFT of every chirp.
RangeChirpMatrix range_fft(const IFCube& cube, WindowKind window);

/// Range FFT then Doppler FFT, magnitude squared. Both windows are power
/// normalized, so white noise of per-sample power P maps to mean power P.
RangeDopplerMap range_doppler(const IFCube& cube, WindowKind window);

/// |x|^2 of the raw samples, [chirp][fast].
PowerMatrix time_chirp_power(const IFCube& cube);
/// |X|^2 of a range-chirp matrix, [chirp][range].
PowerMatrix range_chirp_power(const RangeChirpMatrix& m);
/// The map re-laid as [range][doppler].
PowerMatrix to_matrix(const RangeDopplerMap& map);

double range_bin_width(const WaveformConfig& w);
double speed_bin_width(const WaveformConfig& w);
double bin_to_range(const WaveformConfig& w, double bin);
double range_to_bin(const WaveformConfig& w, double range);
/// Doppler bin (FFT order, fractional) of a range rate (positive receding).
double speed_to_doppler_bin(const WaveformConfig& w, double radial_speed);
/// Signed speed of a Doppler bin in FFT order.
double doppler_bin_to_speed(const WaveformConfig& w, int bin);

struct Cell
{
    int range_bin = 0;
    int doppler_bin = 0;
};

/// Median linear power over cells not excluded, in dB. Throws DomainError
/// when every cell is excluded.
double noise_floor(const RangeDopplerMap& map, std::span<const Cell> exclusion = {});

struct CfarParams
{
    int guard = 2;
    int train = 8;
    double pfa = 1e-4;

    void validate() const;
    int training_cells() const { return 4 * train; }
};

/// Threshold multiplier N (pfa^(-1/N) - 1) for N training cells.
double cfar_alpha(int n_train, double pfa);

/// Noise correlation between DFT bins k apart after an n-point window, k = 0..max_lag.
std::vector<double> bin_correlation(WindowKind kind, int n, int max_lag);

/// A contiguous run of training bins; rho[k] is the correlation at lag k.
struct TrainingRun
{
    int length = 0;
    std::span<const double> rho;
};

/// Threshold multiplier for Gaussian noise when training bins within a run
/// are correlated (runs are mutually independent). Solves
/// 1 / det(I + alpha / N * C) = pfa; equals cfar_alpha(N, pfa) for rho = {1}.
double cfar_alpha(std::span<const TrainingRun> runs, double pfa);

/// Cross-shaped cell-averaging CFAR. Doppler windows wrap; range windows are
/// truncated at the edges with alpha recomputed for the cells present and for
/// the bin correlation of map.window.
/// snr_db is against the local training mean.
std::vector<Detection> ca_cfar(const RangeDopplerMap& map, const CfarParams& params);

/// Detections above nominal_floor * 10^(threshold_db / 10), nominal_floor in
/// linear power. snr_db is against the nominal floor.
std::vector<Detection> fixed_threshold(const RangeDopplerMap& map, double nominal_floor,
                                       double threshold_db);

/// Mean cell power of a map, used as the nominal floor for fixed thresholds.
double mean_power(const RangeDopplerMap& map);

/// Merges 8-connected detections (Doppler wraps) into their strongest cell.
std::vector<Detection> cluster_detections(const RangeDopplerMap& map,
                                          std::span<const Detection> detections);

/// True when a detection lies within +-gate bins of the cell in range and in
/// (circular) Doppler.
bool target_detected(std::span<const Detection> detections, int n_doppler, Cell truth,
                     int gate = 2);

enum class LineStatistic
{
    mean,
    median
};

/// Indices of matrix rows whose statistic exceeds the median row statistic
/// by more than threshold_db. With a [chirp][x] matrix, rows are the
/// vertical stripes of the usual chirp-on-x-axis display; with a
/// [range][doppler] matrix they are horizontal bands.
std::vector<int> excess_rows(const PowerMatrix& m, LineStatistic stat, double threshold_db);

/// Variance (dB^2) of the per-row and per-column mean levels.
struct LineSpread
{
    double row_variance = 0.0;
    double col_variance = 0.0;
};
LineSpread line_spread(const PowerMatrix& m);

}  // namespace radint
