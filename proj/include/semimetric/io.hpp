#pragma once

// Plain-text formats: comma-separated numeric grids, signed edge lists,
// partitions, soft assignments/embeddings, eigensystems and restart reports.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semimetric/datasets.hpp"
#include "semimetric/ksets.hpp"
#include "semimetric/partition.hpp"
#include "semimetric/spectral.hpp"

namespace semimetric::io {

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view token)
{
    token = trim(token);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw Error(Errc::io, "not a number: '" + std::string(token) + "'");
    return v;
}

inline std::size_t parse_index(std::string_view token)
{
    token = trim(token);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw Error(Errc::io, "not a node id: '" + std::string(token) + "'");
    return v;
}

inline std::vector<double> parse_row(std::string_view line)
{
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        row.push_back(parse_double(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return row;
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io, "cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error(Errc::io, "cannot open '" + path + "' for writing");
    return out;
}

} // namespace detail

// Row-major grid, no header.
inline Matrix read_grid(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty())
            continue;
        rows.push_back(detail::parse_row(line));
        if (rows.back().size() != rows.front().size())
            throw Error(Errc::io, "ragged grid");
    }
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    return m;
}

inline void write_grid(std::ostream& out, const Matrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

inline Matrix read_grid(const std::string& path)
{
    auto in = detail::open_in(path);
    return read_grid(in);
}

inline void write_grid(const std::string& path, const Matrix& m)
{
    auto out = detail::open_out(path);
    write_grid(out, m);
}

// Grid preceded by a one-line "n,K" header.
inline void write_headed_grid(std::ostream& out, const Matrix& m)
{
    out << m.rows() << ',' << m.cols() << '\n';
    write_grid(out, m);
}

inline Matrix read_headed_grid(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header))
        throw Error(Errc::io, "missing n,K header");
    const auto dims = detail::parse_row(header);
    if (dims.size() != 2)
        throw Error(Errc::io, "header must be n,K");
    Matrix m = read_grid(in);
    if (m.rows() != static_cast<std::size_t>(dims[0]) || (m.rows() && m.cols() != static_cast<std::size_t>(dims[1])))
        throw Error(Errc::io, "grid does not match its n,K header");
    if (m.rows() == 0)
        m = Matrix(0, static_cast<std::size_t>(dims[1]));
    return m;
}

// Lines "u v w" with 0-based ids and w in {+1, -1}; n is one past the largest id.
inline SignedGraph read_edge_list(std::istream& in)
{
    SignedGraph g;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty() || detail::trim(line).front() == '#')
            continue;
        std::istringstream fields(line);
        long long u = -1, v = -1, w = 0;
        if (!(fields >> u >> v >> w) || u < 0 || v < 0)
            throw Error(Errc::io, "malformed edge line: '" + line + "'");
        if (w != 1 && w != -1)
            throw Error(Errc::io, "edge weight must be +1 or -1");
        if (u == v)
            throw Error(Errc::io, "self-loops are not allowed");
        const auto a = static_cast<std::size_t>(std::min(u, v));
        const auto b = static_cast<std::size_t>(std::max(u, v));
        g.edges.push_back({a, b, static_cast<int>(w)});
        g.n = std::max(g.n, b + 1);
    }
    return g;
}

inline void write_edge_list(std::ostream& out, const SignedGraph& g)
{
    for (const auto& e : g.edges)
        out << e.u << ' ' << e.v << ' ' << e.sign << '\n';
}

// Lines "node_id,cluster_id".
inline void write_partition(std::ostream& out, const Partition& p)
{
    const auto labels = p.labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << i << ',' << labels[i] << '\n';
}

inline std::vector<std::size_t> read_labels(std::istream& in)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(Errc::io, "partition lines must be node_id,cluster_id");
        const auto node = detail::parse_index(std::string_view(line).substr(0, comma));
        const auto cluster = detail::parse_index(std::string_view(line).substr(comma + 1));
        pairs.push_back({node, cluster});
        n = std::max(n, node + 1);
    }
    if (pairs.size() != n)
        throw Error(Errc::io, "partition must list every node exactly once");
    std::vector<std::size_t> labels(n, std::numeric_limits<std::size_t>::max());
    for (auto [node, cluster] : pairs) {
        if (labels[node] != std::numeric_limits<std::size_t>::max())
            throw Error(Errc::io, "node listed twice in partition");
        labels[node] = cluster;
    }
    return labels;
}

inline Partition read_partition(std::istream& in) { return Partition::from_labels(read_labels(in)); }

// "n", eigenvalues on one line, then the n x n eigenvector grid.
inline void write_eigensystem(std::ostream& out, const EigenSystem& es)
{
    out << es.size() << '\n';
    for (std::size_t i = 0; i < es.values.size(); ++i) {
        if (i)
            out << ',';
        out << format_double(es.values[i]);
    }
    out << '\n';
    write_grid(out, es.vectors);
}

inline EigenSystem read_eigensystem(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::io, "missing eigensystem size");
    const auto n = detail::parse_index(line);
    EigenSystem es;
    if (n > 0) {
        if (!std::getline(in, line))
            throw Error(Errc::io, "missing eigenvalue line");
        es.values = detail::parse_row(line);
    }
    es.vectors = read_grid(in);
    if (es.values.size() != n || es.vectors.rows() != n || (n && es.vectors.cols() != n))
        throw Error(Errc::io, "eigensystem dimensions disagree");
    return es;
}

// Lines "restart,objective".
inline void write_restart_report(std::ostream& out, const RestartReport& report)
{
    for (std::size_t r = 0; r < report.objectives.size(); ++r)
        out << r << ',' << format_double(report.objectives[r]) << '\n';
}

} // namespace semimetric::io
