#include "newtonflow/initial_data.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "newtonflow/transforms.hpp"

namespace nwfl {

Field build_initial(const InitialData& d, const Grid& g) {
    switch (d.shape) {
        case InitialData::Shape::Zero: return Field(g);
        case InitialData::Shape::Modes: {
            SpectralField c(g);
            for (const ModeAmp& m : d.modes) {
                for (int i = 0; i < 3; ++i)
                    if (m.k[i] < 1 || m.k[i] > g.N)
                        throw config_error("initial data: mode index out of range 1.." +
                                           std::to_string(g.N));
                const std::size_t idx =
                    (static_cast<std::size_t>(m.k[0] - 1) * g.N + (m.k[1] - 1)) * g.N +
                    (m.k[2] - 1);
                c.c[idx] += m.amp;
            }
            return from_spectral(c);
        }
        case InitialData::Shape::Gaussian: {
            Field u(g);
            const double cx = 0.5 * g.L;
            const double pl = M_PI / g.L;
            for (int ix = 0; ix < g.N; ++ix) {
                const double x = g.node(ix);
                for (int iy = 0; iy < g.N; ++iy) {
                    const double y = g.node(iy);
                    for (int iz = 0; iz < g.N; ++iz) {
                        const double z = g.node(iz);
                        const double r2 = (x - cx) * (x - cx) + (y - cx) * (y - cx) +
                                          (z - cx) * (z - cx);
                        u.at(ix, iy, iz) = d.gauss_amp * std::exp(-d.gauss_width * r2) *
                                           std::sin(pl * x) * std::sin(pl * y) *
                                           std::sin(pl * z);
                    }
                }
            }
            return u;
        }
    }
    throw config_error("initial data: unknown shape");
}

InitialData scaled(InitialData d, double s) {
    for (ModeAmp& m : d.modes) m.amp *= s;
    d.gauss_amp *= s;
    return d;
}

namespace {

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::string describe(const InitialData& d) {
    switch (d.shape) {
        case InitialData::Shape::Zero: return "zero";
        case InitialData::Shape::Gaussian:
            return "gaussian(" + fmt_double(d.gauss_width) + "," + fmt_double(d.gauss_amp) + ")";
        case InitialData::Shape::Modes: {
            std::string s = d.modes.size() == 1 ? "mode(" : "modes(";
            for (std::size_t i = 0; i < d.modes.size(); ++i) {
                if (i) s += "; ";
                const ModeAmp& m = d.modes[i];
                s += std::to_string(m.k[0]) + "," + std::to_string(m.k[1]) + "," +
                     std::to_string(m.k[2]) + "," + fmt_double(m.amp);
            }
            return s + ")";
        }
    }
    return "?";
}

namespace {

// "name(arg,arg,...)" with optional ';'-separated groups inside.
struct Call {
    std::string name;
    std::vector<std::vector<std::string>> groups;
};

Call parse_call(const std::string& text) {
    Call c;
    const auto open = text.find('(');
    if (open == std::string::npos) {
        c.name = text;
        return c;
    }
    if (text.back() != ')') throw config_error("initial data: missing ')' in '" + text + "'");
    c.name = text.substr(0, open);
    const std::string body = text.substr(open + 1, text.size() - open - 2);
    std::stringstream groups(body);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<std::string> args;
        std::stringstream ss(group);
        std::string a;
        while (std::getline(ss, a, ',')) {
            std::size_t b = 0, e = a.size();
            while (b < e && std::isspace(static_cast<unsigned char>(a[b]))) ++b;
            while (e > b && std::isspace(static_cast<unsigned char>(a[e - 1]))) --e;
            args.push_back(a.substr(b, e - b));
        }
        c.groups.push_back(std::move(args));
    }
    return c;
}

double parse_num(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error(std::string("initial data: bad ") + what + " '" + s + "'");
    }
}

int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error(std::string("initial data: bad ") + what + " '" + s + "'");
    }
}

ModeAmp parse_mode_group(const std::vector<std::string>& args) {
    if (args.size() != 4)
        throw config_error("initial data: mode takes (k1,k2,k3,amp), got " +
                           std::to_string(args.size()) + " arguments");
    ModeAmp m;
    for (int i = 0; i < 3; ++i) {
        m.k[i] = parse_int(args[i], "mode index");
        // The upper bound depends on the grid; k >= 1 does not.
        if (m.k[i] < 1)
            throw config_error("initial data: mode index " + args[i] + " must be >= 1");
    }
    m.amp = parse_num(args[3], "amplitude");
    return m;
}

} // namespace

InitialData parse_initial(const std::string& text) {
    const Call c = parse_call(text);
    InitialData d;
    if (c.name == "zero") {
        if (!c.groups.empty()) throw config_error("initial data: zero takes no arguments");
        d.shape = InitialData::Shape::Zero;
        d.modes.clear();
        return d;
    }
    if (c.name == "mode" || c.name == "modes") {
        if (c.groups.empty()) throw config_error("initial data: " + c.name + " needs arguments");
        d.shape = InitialData::Shape::Modes;
        d.modes.clear();
        for (const auto& g : c.groups) d.modes.push_back(parse_mode_group(g));
        return d;
    }
    if (c.name == "gaussian") {
        if (c.groups.size() != 1 || c.groups[0].size() != 2)
            throw config_error("initial data: gaussian takes (width,amp)");
        d.shape = InitialData::Shape::Gaussian;
        d.modes.clear();
        d.gauss_width = parse_num(c.groups[0][0], "width");
        d.gauss_amp = parse_num(c.groups[0][1], "amplitude");
        if (!(d.gauss_width > 0)) throw config_error("initial data: gaussian width must be > 0");
        return d;
    }
    throw config_error("initial data: unknown shape '" + c.name +
                       "' (want zero, mode, modes, or gaussian)");
}

} // namespace nwfl
