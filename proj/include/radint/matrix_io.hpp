// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "radint/processing.hpp"
#include "radint/synthesis.hpp"

namespace radint {

/// Row-major complex float matrix as stored on disk.
struct StoredMatrix
{
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<float>> data;
    std::map<std::string, std::string> header;
};

/// Writes `<base>.bin` (little-endian float32 interleaved I/Q, row-major) and
/// `<base>.hdr` (key=value lines). Throws ConfigError naming the file on I/O
/// failure.
void write_matrix(const std::string& base, int rows, int cols,
                  const std::vector<std::complex<float>>& data,
                  const std::map<std::string, std::string>& header);
StoredMatrix read_matrix(const std::string& base);

std::vector<std::complex<float>> to_float(const std::vector<cdouble>& v);
/// Real values stored with a zero Q component.
std::vector<std::complex<float>> to_float(const std::vector<double>& v);

/// Header entries common to every dump of a cube: dims, fs and waveform.
std::map<std::string, std::string> waveform_header(const WaveformConfig& w);

/// Six matrices of one dwell with and without interference: time-chirp
/// |ADC|, range-chirp |X| and range-Doppler power. Returns the base paths.
struct MapDumpSet
{
    std::vector<std::string> files;
};
MapDumpSet dump_dwell_maps(const std::string& dir, const IFCube& clean, const IFCube& interfered,
                           WindowKind window);

}  // namespace radint
