// SPDX-License-Identifier: Apache-2.0
//
// radint: IF-level automotive radar mutual-interference simulator.
// ------------------------------------------------------------------------
#include "radint/matrix_io.hpp"

#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "radint/common.hpp"

namespace radint {

namespace {

std::uint32_t to_le(std::uint32_t v)
{
    if constexpr (std::endian::native == std::endian::big)
    {
        v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
    }
    return v;
}

}  // namespace

void write_matrix(const std::string& base, int rows, int cols,
                  const std::vector<std::complex<float>>& data,
                  const std::map<std::string, std::string>& header)
{
    if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != data.size())
    {
        throw DomainError(fmt::format("{}: {}x{} does not match {} values", base, rows, cols, data.size()));
    }
    const std::string bin = base + ".bin";
    const std::string hdr = base + ".hdr";
    {
        std::ofstream out(bin, std::ios::binary);
        if (!out)
        {
            throw ConfigError(fmt::format("cannot write '{}'", bin));
        }
        std::vector<std::uint32_t> words(2 * data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
        {
            words[2 * i] = to_le(std::bit_cast<std::uint32_t>(data[i].real()));
            words[2 * i + 1] = to_le(std::bit_cast<std::uint32_t>(data[i].imag()));
        }
        out.write(reinterpret_cast<const char*>(words.data()),
                  static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
        if (!out)
        {
            throw ConfigError(fmt::format("write failed for '{}'", bin));
        }
    }
    std::ofstream out(hdr);
    if (!out)
    {
        throw ConfigError(fmt::format("cannot write '{}'", hdr));
    }
    out << "format=f32le-iq\n";
    out << "layout=row-major\n";
    out << "rows=" << rows << '\n';
    out << "cols=" << cols << '\n';
    for (const auto& [k, v] : header)
    {
        if (k != "format" && k != "layout" && k != "rows" && k != "cols")
        {
            out << k << '=' << v << '\n';
        }
    }
    if (!out)
    {
        throw ConfigError(fmt::format("write failed for '{}'", hdr));
    }
}

StoredMatrix read_matrix(const std::string& base)
{
    const std::string hdr = base + ".hdr";
    const std::string bin = base + ".bin";
    std::ifstream h(hdr);
    if (!h)
    {
        throw ConfigError(fmt::format("cannot open '{}'", hdr));
    }
    StoredMatrix m;
    std::string line;
    while (std::getline(h, line))
    {
        const auto eq = line.find('=');
        if (eq != std::string::npos)
        {
            m.header[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    try
    {
        m.rows = std::stoi(m.header.at("rows"));
        m.cols = std::stoi(m.header.at("cols"));
    }
    catch (const std::exception&)
    {
        throw ConfigError(fmt::format("'{}' lacks valid rows/cols", hdr));
    }
    const std::size_t n = static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols);
    std::ifstream in(bin, std::ios::binary);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open '{}'", bin));
    }
    std::vector<std::uint32_t> words(2 * n);
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
    if (in.gcount() != static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)))
    {
        throw ConfigError(fmt::format("'{}' is shorter than its header says", bin));
    }
    m.data.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        m.data[i] = {std::bit_cast<float>(to_le(words[2 * i])), std::bit_cast<float>(to_le(words[2 * i + 1]))};
    }
    return m;
}

std::vector<std::complex<float>> to_float(const std::vector<cdouble>& v)
{
    std::vector<std::complex<float>> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        out[i] = {static_cast<float>(v[i].real()), static_cast<float>(v[i].imag())};
    }
    return out;
}

std::vector<std::complex<float>> to_float(const std::vector<double>& v)
{
    std::vector<std::complex<float>> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        out[i] = {static_cast<float>(v[i]), 0.0f};
    }
    return out;
}

std::map<std::string, std::string> waveform_header(const WaveformConfig& w)
{
    return {{"adc_rate_hz", fmt::format("{}", w.adc_rate)},
            {"slope_hz_per_s", fmt::format("{}", w.slope)},
            {"chirp_duration_s", fmt::format("{}", w.chirp_duration)},
            {"pri_s", fmt::format("{}", w.pri)},
            {"carrier_hz", fmt::format("{}", w.carrier)},
            {"n_chirps", fmt::format("{}", w.n_chirps)},
            {"n_fast", fmt::format("{}", w.n_fast())}};
}

MapDumpSet dump_dwell_maps(const std::string& dir, const IFCube& clean, const IFCube& interfered,
                           WindowKind window)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw ConfigError(fmt::format("cannot create '{}': {}", dir, ec.message()));
    }
    MapDumpSet set;
    for (const auto& [tag, cube] : {std::pair<const char*, const IFCube*>{"clean", &clean},
                                    std::pair<const char*, const IFCube*>{"interfered", &interfered}})
    {
        auto header = waveform_header(cube->waveform);
        header["window"] = std::string(to_string(window));

        PowerMatrix tc = time_chirp_power(*cube);
        for (auto& v : tc.data)
        {
            v = std::sqrt(v);
        }
        header["quantity"] = "abs_adc";
        header["axes"] = "chirp,fast_time";
        const std::string tc_base = dir + "/time_chirp_" + tag;
        write_matrix(tc_base, tc.rows, tc.cols, to_float(tc.data), header);

        const RangeChirpMatrix rcm = range_fft(*cube, window);
        PowerMatrix rc = range_chirp_power(rcm);
        for (auto& v : rc.data)
        {
            v = std::sqrt(v);
        }
        header["quantity"] = "abs_range_fft";
        header["axes"] = "chirp,range_bin";
        const std::string rc_base = dir + "/range_chirp_" + tag;
        write_matrix(rc_base, rc.rows, rc.cols, to_float(rc.data), header);

        const RangeDopplerMap map = range_doppler(*cube, window);
        header["quantity"] = "power";
        header["axes"] = "range_bin,doppler_bin";
        header["doppler_order"] = "fft";
        const std::string rd_base = dir + "/range_doppler_" + tag;
        write_matrix(rd_base, map.n_range, map.n_doppler, to_float(map.power), header);

        set.files.insert(set.files.end(), {tc_base, rc_base, rd_base});
    }
    return set;
}

}  // namespace radint
