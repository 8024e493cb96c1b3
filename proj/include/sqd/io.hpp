#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace sqd {

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

inline bool parse_kind(const std::string& s, GraphClass& out) {
    for (GraphClass k : {GraphClass::Sparse, GraphClass::UnitDisk, GraphClass::UnitSquare, GraphClass::Square})
        if (s == class_name(k)) {
            out = k;
            return true;
        }
    return false;
}

namespace detail {

// Splits a line into whitespace-separated tokens; '#' starts a comment.
inline std::vector<std::string> tokens(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream in(body);
    std::vector<std::string> t;
    for (std::string w; in >> w;) t.push_back(w);
    return t;
}

inline double to_double(const std::string& s, int line) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + s + "'");
    }
    if (used != s.size()) throw ParseError(line, "expected a number, got '" + s + "'");
    if (!std::isfinite(v)) throw ParseError(line, "non-finite number '" + s + "'");
    return v;
}

inline long long to_int(const std::string& s, int line) {
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + s + "'");
    }
    if (used != s.size()) throw ParseError(line, "expected an integer, got '" + s + "'");
    return v;
}

}  // namespace detail

// Instance text format:
//   kind n
//   x y [half_side]      one line per object (geometric kinds)
//   m d                  then m lines "u v" (sparse-graph)
// Blank lines and '#' comments are ignored.
inline GraphHandle read_instance(std::istream& in) {
    int line_no = 0;
    std::string line;
    auto next = [&]() -> std::vector<std::string> {
        while (std::getline(in, line)) {
            ++line_no;
            auto t = detail::tokens(line);
            if (!t.empty()) return t;
        }
        return {};
    };
    auto head = next();
    if (head.empty()) throw ParseError(line_no + 1, "missing header 'kind n'");
    if (head.size() != 2) throw ParseError(line_no, "header must be 'kind n'");
    GraphClass cls;
    if (!parse_kind(head[0], cls)) throw ParseError(line_no, "unknown kind '" + head[0] + "'");
    long long n = detail::to_int(head[1], line_no);
    if (n < 1 || n > (1 << 30)) throw ParseError(line_no, "n out of range");

    if (cls == GraphClass::Sparse) {
        auto md = next();
        if (md.size() != 2) throw ParseError(line_no + (md.empty() ? 1 : 0), "expected 'm d'");
        long long m = detail::to_int(md[0], line_no);
        long long d = detail::to_int(md[1], line_no);
        if (m < 0) throw ParseError(line_no, "negative edge count");
        if (d < 1) throw ParseError(line_no, "VC dimension must be at least 1");
        std::vector<std::pair<int, int>> edges;
        edges.reserve(static_cast<size_t>(m));
        for (long long i = 0; i < m; ++i) {
            auto e = next();
            if (e.empty()) throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edges, got " + std::to_string(i));
            if (e.size() != 2) throw ParseError(line_no, "edge line must be 'u v'");
            long long u = detail::to_int(e[0], line_no), v = detail::to_int(e[1], line_no);
            if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(line_no, "edge endpoint out of range");
            edges.push_back({static_cast<int>(u), static_cast<int>(v)});
        }
        if (!next().empty()) throw ParseError(line_no, "trailing data after the edge list");
        return GraphHandle::of(SparseGraph::from_edges(static_cast<int>(n), edges, static_cast<int>(d)));
    }

    GeometricInstance g;
    g.kind = cls == GraphClass::UnitDisk ? GeoKind::UnitDisk : cls == GraphClass::UnitSquare ? GeoKind::UnitSquare : GeoKind::Square;
    for (long long i = 0; i < n; ++i) {
        auto t = next();
        if (t.empty()) throw ParseError(line_no + 1, "expected " + std::to_string(n) + " objects, got " + std::to_string(i));
        size_t want_max = cls == GraphClass::UnitDisk ? 2 : 3;
        if (t.size() < 2 || t.size() > want_max)
            throw ParseError(line_no, cls == GraphClass::UnitDisk ? "object line must be 'x y'" : "object line must be 'x y [half_side]'");
        Point p{detail::to_double(t[0], line_no), detail::to_double(t[1], line_no)};
        double half = t.size() == 3 ? detail::to_double(t[2], line_no) : 0.5;
        if (!(half > 0)) throw ParseError(line_no, "half side must be positive");
        if (cls == GraphClass::UnitSquare && !g.h.empty() && half != g.h[0])
            throw ParseError(line_no, "unit-square instance with unequal half sides");
        g.c.push_back(p);
        g.h.push_back(half);
    }
    if (!next().empty()) throw ParseError(line_no, "more objects than the header declares");
    return GraphHandle::of(std::move(g));
}

inline GraphHandle read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_instance(in);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_instance(const GraphHandle& h, std::ostream& out) {
    out << class_name(h.cls) << ' ' << h.n() << '\n';
    if (h.is_sparse()) {
        long long m = 0;
        for (int u = 0; u < h.n(); ++u)
            for (int v : h.sparse.adj[u]) m += u < v;
        out << m << ' ' << h.sparse.declared_vc_dim << '\n';
        for (int u = 0; u < h.n(); ++u)
            for (int v : h.sparse.adj[u])
                if (u < v) out << u << ' ' << v << '\n';
        return;
    }
    for (int i = 0; i < h.n(); ++i) {
        out << format_double(h.geo.c[i].x) << ' ' << format_double(h.geo.c[i].y);
        if (h.cls != GraphClass::UnitDisk) out << ' ' << format_double(h.geo.h[i]);
        out << '\n';
    }
}

inline std::string instance_text(const GraphHandle& h) {
    std::ostringstream s;
    write_instance(h, s);
    return s.str();
}

// FNV-1a over bytes, printed as 16 hex digits.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 1469598103934665603ull) {
    auto p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string instance_digest(const GraphHandle& h) {
    std::string t = instance_text(h);
    return hex64(fnv1a64(t.data(), t.size()));
}

inline std::string ecc_digest(const std::vector<int>& ecc) {
    uint64_t d = 1469598103934665603ull;
    for (int e : ecc) {
        std::string s = std::to_string(e) + ",";
        d = fnv1a64(s.data(), s.size(), d);
    }
    return hex64(d);
}

}  // namespace sqd
