/*
 * Copyright 2026 The semisparse Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#include <semisparse/io.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace semisparse {

namespace {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::string_view strip_comment(std::string_view line)
{
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

template <typename T>
bool parse_number(std::string_view token, T& value)
{
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc() && ptr == token.data() + token.size();
}

struct Builder
{
    std::vector<std::array<double, 3>> positions;
    std::vector<std::array<Index, 3>> faces;

    void add_polygon(
        const std::vector<Index>& poly,
        const ReadOptions& options,
        const std::string& name,
        std::size_t line)
    {
        if (poly.size() < 3) throw ParseError(name, line, "face with fewer than 3 vertices");
        if (poly.size() > 3 && !options.triangulate) {
            throw UnsupportedFace(
                name + ":" + std::to_string(line) + ": face with " + std::to_string(poly.size()) +
                " vertices (enable triangulation to accept polygons)");
        }
        for (std::size_t k = 1; k + 1 < poly.size(); ++k) faces.push_back({poly[0], poly[k], poly[k + 1]});
    }

    MeshData finish() const
    {
        MeshData data;
        data.positions.resize(static_cast<Eigen::Index>(positions.size()), 3);
        for (std::size_t i = 0; i < positions.size(); ++i) {
            for (int c = 0; c < 3; ++c) data.positions(static_cast<Eigen::Index>(i), c) = positions[i][c];
        }
        data.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
        for (std::size_t i = 0; i < faces.size(); ++i) {
            for (int c = 0; c < 3; ++c) data.faces(static_cast<Eigen::Index>(i), c) = faces[i][c];
        }
        return data;
    }
};

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

MeshFormat mesh_format(const std::filesystem::path& path)
{
    const std::string ext = lowercase(path.extension().string());
    if (ext == ".obj") return MeshFormat::Obj;
    if (ext == ".off") return MeshFormat::Off;
    throw IoError("unsupported mesh extension '" + ext + "' for " + path.string());
}

MeshData read_obj(std::istream& in, const std::string& name, const ReadOptions& options)
{
    Builder builder;
    std::string raw;
    std::size_t line_no = 0;
    std::vector<Index> poly;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto tokens = split_ws(strip_comment(raw));
        if (tokens.empty()) continue;
        if (tokens[0] == "v") {
            if (tokens.size() < 4) throw ParseError(name, line_no, "vertex needs 3 coordinates");
            std::array<double, 3> p{};
            for (int c = 0; c < 3; ++c) {
                if (!parse_number(tokens[c + 1], p[c])) {
                    throw ParseError(name, line_no, "bad coordinate '" + std::string(tokens[c + 1]) + "'");
                }
            }
            builder.positions.push_back(p);
        } else if (tokens[0] == "f") {
            poly.clear();
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const std::string_view ref = tokens[k].substr(0, tokens[k].find('/'));
                long idx = 0;
                if (!parse_number(ref, idx) || idx == 0) {
                    throw ParseError(name, line_no, "bad face index '" + std::string(tokens[k]) + "'");
                }
                // negative indices count back from the most recent vertex
                const long count = static_cast<long>(builder.positions.size());
                poly.push_back(static_cast<Index>(idx > 0 ? idx - 1 : count + idx));
            }
            builder.add_polygon(poly, options, name, line_no);
        }
        // other records (vn, vt, g, o, usemtl, ...) carry nothing we use
    }
    return builder.finish();
}

MeshData read_off(std::istream& in, const std::string& name, const ReadOptions& options)
{
    std::string raw;
    std::size_t line_no = 0;
    auto next_tokens = [&](std::vector<std::string_view>& tokens, std::string& storage) {
        while (std::getline(in, storage)) {
            ++line_no;
            tokens = split_ws(strip_comment(storage));
            if (!tokens.empty()) return true;
        }
        return false;
    };

    std::vector<std::string_view> tokens;
    if (!next_tokens(tokens, raw) || tokens[0] != "OFF") {
        throw ParseError(name, line_no, "missing OFF header");
    }
    std::vector<std::string_view> counts(tokens.begin() + 1, tokens.end());
    std::string count_line;
    if (counts.empty()) {
        if (!next_tokens(tokens, count_line)) throw ParseError(name, line_no, "missing counts");
        counts = tokens;
    }
    long num_vertices = 0, num_faces = 0;
    if (counts.size() < 2 || !parse_number(counts[0], num_vertices) || !parse_number(counts[1], num_faces) ||
        num_vertices < 0 || num_faces < 0) {
        throw ParseError(name, line_no, "bad counts line");
    }

    Builder builder;
    builder.positions.reserve(static_cast<std::size_t>(num_vertices));
    for (long i = 0; i < num_vertices; ++i) {
        if (!next_tokens(tokens, raw)) throw ParseError(name, line_no, "unexpected end of vertex block");
        if (tokens.size() < 3) throw ParseError(name, line_no, "vertex needs 3 coordinates");
        std::array<double, 3> p{};
        for (int c = 0; c < 3; ++c) {
            if (!parse_number(tokens[c], p[c])) {
                throw ParseError(name, line_no, "bad coordinate '" + std::string(tokens[c]) + "'");
            }
        }
        builder.positions.push_back(p);
    }

    std::vector<Index> poly;
    for (long i = 0; i < num_faces; ++i) {
        if (!next_tokens(tokens, raw)) throw ParseError(name, line_no, "unexpected end of face block");
        long n = 0;
        if (!parse_number(tokens[0], n) || n < 0 || tokens.size() < static_cast<std::size_t>(n) + 1) {
            throw ParseError(name, line_no, "bad face record");
        }
        poly.clear();
        for (long k = 0; k < n; ++k) {
            long idx = 0;
            if (!parse_number(tokens[k + 1], idx)) {
                throw ParseError(name, line_no, "bad face index '" + std::string(tokens[k + 1]) + "'");
            }
            poly.push_back(static_cast<Index>(idx));
        }
        // trailing per-face colour values are ignored
        builder.add_polygon(poly, options, name, line_no);
    }
    return builder.finish();
}

std::string format_double(double value)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

void write_obj(std::ostream& out, const VertexMatrix<double>& positions, const FaceMatrix& faces)
{
    for (Eigen::Index i = 0; i < positions.rows(); ++i) {
        out << "v " << format_double(positions(i, 0)) << ' ' << format_double(positions(i, 1)) << ' '
            << format_double(positions(i, 2)) << '\n';
    }
    for (Eigen::Index t = 0; t < faces.rows(); ++t) {
        out << "f " << faces(t, 0) + 1 << ' ' << faces(t, 1) + 1 << ' ' << faces(t, 2) + 1 << '\n';
    }
}

void write_off(std::ostream& out, const VertexMatrix<double>& positions, const FaceMatrix& faces)
{
    out << "OFF\n" << positions.rows() << ' ' << faces.rows() << " 0\n";
    for (Eigen::Index i = 0; i < positions.rows(); ++i) {
        out << format_double(positions(i, 0)) << ' ' << format_double(positions(i, 1)) << ' '
            << format_double(positions(i, 2)) << '\n';
    }
    for (Eigen::Index t = 0; t < faces.rows(); ++t) {
        out << "3 " << faces(t, 0) << ' ' << faces(t, 1) << ' ' << faces(t, 2) << '\n';
    }
}

MeshData read_mesh_data(const std::filesystem::path& path, const ReadOptions& options)
{
    const MeshFormat format = mesh_format(path);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return format == MeshFormat::Obj ? read_obj(in, path.string(), options)
                                     : read_off(in, path.string(), options);
}

TriMesh<double> read_mesh(const std::filesystem::path& path, const ReadOptions& options)
{
    MeshData data = read_mesh_data(path, options);
    return build_mesh<double>(std::move(data.positions), std::move(data.faces));
}

void write_mesh(const std::filesystem::path& path, const VertexMatrix<double>& positions, const FaceMatrix& faces)
{
    const MeshFormat format = mesh_format(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    if (format == MeshFormat::Obj) {
        write_obj(out, positions, faces);
    } else {
        write_off(out, positions, faces);
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void write_mesh(const std::filesystem::path& path, const TriMesh<double>& mesh)
{
    write_mesh(path, mesh.vertices(), mesh.faces());
}

} // namespace semisparse
