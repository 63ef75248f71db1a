#include "wigbound/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wigbound {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
    return std::string(buf, r.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

namespace {

void row(std::string& s, std::initializer_list<double> v) {
    bool first = true;
    for (double d : v) {
        if (!first) s += ',';
        s += format_double(d);
        first = false;
    }
    s += '\n';
}

}  // namespace

std::string wavefunction_csv(const Wavefunction& psi, const std::vector<double>& x) {
    std::string s = "x,re_psi,im_psi\n";
    for (double xi : x) {
        const cplx v = psi(xi);
        row(s, {xi, v.real(), v.imag()});
    }
    return s;
}

std::string field_csv(const WignerField& F) {
    const auto& g = F.grid();
    std::string s = "x,p,F\n";
    for (std::size_t i = 0; i < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.np(); ++j) row(s, {g.x_nodes[i], g.p_nodes[j], F.at(i, j)});
    }
    return s;
}

std::string complex_field_csv(const ComplexField& F) {
    const auto& g = F.grid;
    std::string s = "x,p,re,im\n";
    for (std::size_t i = 0; i < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.np(); ++j) {
            const cplx v = F.at(i, j);
            row(s, {g.x_nodes[i], g.p_nodes[j], v.real(), v.imag()});
        }
    }
    return s;
}

std::string spectrum_csv(const std::vector<double>& energies) {
    std::string s = "index,E\n";
    for (std::size_t k = 0; k < energies.size(); ++k) {
        s += std::to_string(k + 1) + ',' + format_double(energies[k]) + '\n';
    }
    return s;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string s = "t,x,p\n";
    for (const auto& q : t.samples) row(s, {q.t, q.x, q.p});
    return s;
}

std::string contours_csv(const std::vector<Trajectory>& contours) {
    std::string s = "contour_id,vertex_id,x,p,level\n";
    for (std::size_t c = 0; c < contours.size(); ++c) {
        const auto& t = contours[c];
        for (std::size_t v = 0; v < t.samples.size(); ++v) {
            s += std::to_string(c) + ',' + std::to_string(v) + ',' + format_double(t.samples[v].x) +
                 ',' + format_double(t.samples[v].p) + ',' + format_double(t.level) + '\n';
        }
    }
    return s;
}

std::string force_csv(const EffectiveForceField& f) {
    const auto& g = f.grid;
    std::string s = "x,p,force,masked\n";
    for (std::size_t i = 0; i < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.np(); ++j) {
            const std::size_t k = g.flat(i, j);
            s += format_double(g.x_nodes[i]) + ',' + format_double(g.p_nodes[j]) + ',' +
                 format_double(f.values[k]) + ',' + (f.mask[k] ? "1" : "0") + '\n';
        }
    }
    return s;
}

std::string report_csv(const BoundaryReport& r) {
    std::string s = "name,equation,measured_max,tolerance,pass\n";
    for (const auto& c : r.checks) {
        s += c.name + ",\"" + c.equation + "\"," + format_double(c.measured_max) + ',' +
             format_double(c.tolerance) + ',' + (c.pass ? "true" : "false") + '\n';
    }
    return s;
}

Wavefunction read_wavefunction_csv(const std::filesystem::path& path, const Domain& domain) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read state file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,re_psi,im_psi", 0) != 0) {
        throw IoError("state file must start with the header x,re_psi,im_psi");
    }
    std::vector<double> x;
    std::vector<cplx> v;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double f[3];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int k = 0; k < 3; ++k) {
            const auto r = std::from_chars(p, end, f[k]);
            if (r.ec != std::errc() || (k < 2 && (r.ptr == end || *r.ptr != ','))) {
                throw IoError("malformed row " + std::to_string(lineno) + " in " + path.string());
            }
            p = r.ptr + 1;
        }
        x.push_back(f[0]);
        v.emplace_back(f[1], f[2]);
    }
    if (x.size() < 4) throw IoError("state file needs at least four rows");
    return Wavefunction::sampled(std::move(x), std::move(v), domain, WavefunctionKind::confined);
}

}  // namespace wigbound
