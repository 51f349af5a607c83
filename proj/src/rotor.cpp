#include "rotarn/rotor.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace rotarn {

namespace {

using nlohmann::json;

[[noreturn]] void model_fail(const std::string& path, const std::string& what) {
    throw ModelError("rotor model: " + path + ": " + what);
}

double get_number(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) model_fail(path + "." + key, "missing field");
    if (!j[key].is_number()) model_fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) model_fail(path + "." + key, "missing field");
    if (!j[key].is_number_integer()) model_fail(path + "." + key, "expected an integer");
    return j[key].get<int>();
}

Eigen::Matrix2d get_matrix2(const json& j, const std::string& path,
                            const std::string& key, bool required) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    if (!j.contains(key)) {
        if (required) model_fail(path + "." + key, "missing field");
        return m;
    }
    const json& v = j[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 ||
        !v[1].is_array() || v[1].size() != 2) {
        model_fail(path + "." + key, "expected a 2x2 array");
    }
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            if (!v[r][c].is_number()) model_fail(path + "." + key, "expected numbers");
            m(r, c) = v[r][c].get<double>();
        }
    return m;
}

}  // namespace

RotorModel parse_model(const json& doc) {
    RotorModel model;
    if (!doc.is_object()) model_fail("$", "document must be an object");
    model.name = doc.value("name", std::string("rotor"));
    if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty()) {
        model_fail("$.nodes", "missing or empty node position array");
    }
    for (const auto& n : doc["nodes"]) {
        if (!n.is_number()) model_fail("$.nodes", "expected numbers");
        model.nodes.push_back(n.get<double>());
    }
    int idx = 0;
    for (const auto& s : doc.value("shaft_segments", json::array())) {
        const std::string p = "$.shaft_segments[" + std::to_string(idx++) + "]";
        ShaftSegment seg;
        seg.start_node = get_int(s, p, "start_node");
        seg.end_node = get_int(s, p, "end_node");
        seg.outer_diameter = get_number(s, p, "outer_diameter");
        seg.inner_diameter = get_number(s, p, "inner_diameter");
        seg.density = get_number(s, p, "density");
        seg.youngs_modulus = get_number(s, p, "youngs_modulus");
        model.segments.push_back(seg);
    }
    idx = 0;
    for (const auto& d : doc.value("disks", json::array())) {
        const std::string p = "$.disks[" + std::to_string(idx++) + "]";
        Disk disk;
        disk.node = get_int(d, p, "node");
        disk.mass = get_number(d, p, "mass");
        disk.polar_inertia = get_number(d, p, "polar_inertia");
        disk.diametral_inertia = get_number(d, p, "diametral_inertia");
        model.disks.push_back(disk);
    }
    idx = 0;
    for (const auto& b : doc.value("bearings", json::array())) {
        const std::string p = "$.bearings[" + std::to_string(idx++) + "]";
        Bearing brg;
        brg.node = get_int(b, p, "node");
        brg.stiffness = get_matrix2(b, p, "stiffness", true);
        brg.damping = get_matrix2(b, p, "damping", false);
        brg.cross_stiffness = get_matrix2(b, p, "cross_stiffness", false);
        model.bearings.push_back(brg);
    }
    if (doc.contains("rayleigh")) {
        model.rayleigh.alpha = get_number(doc["rayleigh"], "$.rayleigh", "alpha");
        model.rayleigh.beta = get_number(doc["rayleigh"], "$.rayleigh", "beta");
    }
    validate(model);
    return model;
}

RotorModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("rotor model: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ModelError("rotor model: '" + path + "' does not parse: " + e.what());
    }
    return parse_model(doc);
}

void validate(const RotorModel& model) {
    const int n = model.node_count();
    for (int i = 1; i < n; ++i) {
        if (!(model.nodes[i] > model.nodes[i - 1])) {
            model_fail("$.nodes[" + std::to_string(i) + "]",
                       "node positions must be strictly increasing");
        }
    }
    auto check_node = [&](int node, const std::string& path) {
        if (node < 0 || node >= n) {
            model_fail(path, "references nonexistent node " + std::to_string(node));
        }
    };
    int idx = 0;
    for (const auto& s : model.segments) {
        const std::string p = "$.shaft_segments[" + std::to_string(idx++) + "]";
        check_node(s.start_node, p + ".start_node");
        check_node(s.end_node, p + ".end_node");
        if (s.start_node >= s.end_node) model_fail(p, "start_node must precede end_node");
        if (!(s.outer_diameter > s.inner_diameter)) {
            model_fail(p, "outer_diameter must exceed inner_diameter");
        }
        if (s.inner_diameter < 0.0 || s.density < 0.0 || s.youngs_modulus < 0.0) {
            model_fail(p, "physical quantities must be nonnegative");
        }
    }
    idx = 0;
    for (const auto& d : model.disks) {
        const std::string p = "$.disks[" + std::to_string(idx++) + "]";
        check_node(d.node, p + ".node");
        if (d.mass < 0.0 || d.polar_inertia < 0.0 || d.diametral_inertia < 0.0) {
            model_fail(p, "physical quantities must be nonnegative");
        }
    }
    idx = 0;
    for (const auto& b : model.bearings) {
        const std::string p = "$.bearings[" + std::to_string(idx++) + "]";
        check_node(b.node, p + ".node");
        const double scale = b.stiffness.cwiseAbs().maxCoeff();
        if (std::abs(b.stiffness(0, 1) - b.stiffness(1, 0)) > 1e-8 * std::max(scale, 1.0)) {
            model_fail(p + ".stiffness", "direct stiffness must be symmetric");
        }
    }
    if (model.rayleigh.alpha < 0.0 || model.rayleigh.beta < 0.0) {
        model_fail("$.rayleigh", "coefficients must be nonnegative");
    }
}

namespace {

// Cubic Hermite shape values, first and second derivatives at local
// coordinate xi in [0,1] for an element of length L. Order matches
// (value at node 1, slope at node 1, value at node 2, slope at node 2).
struct Hermite {
    std::array<double, 4> h, dh, ddh;
};

Hermite hermite(double xi, double len) {
    Hermite s;
    const double x2 = xi * xi, x3 = x2 * xi;
    s.h = {1.0 - 3.0 * x2 + 2.0 * x3, len * (xi - 2.0 * x2 + x3),
           3.0 * x2 - 2.0 * x3, len * (-x2 + x3)};
    s.dh = {(-6.0 * xi + 6.0 * x2) / len, 1.0 - 4.0 * xi + 3.0 * x2,
            (6.0 * xi - 6.0 * x2) / len, -2.0 * xi + 3.0 * x2};
    s.ddh = {(-6.0 + 12.0 * xi) / (len * len), (-4.0 + 6.0 * xi) / len,
             (6.0 - 12.0 * xi) / (len * len), (-2.0 + 6.0 * xi) / len};
    return s;
}

// 4-point Gauss-Legendre rule on [0,1]; exact through degree 7, enough
// for products of the cubic shape functions.
constexpr std::array<double, 4> kGaussX = {0.06943184420297371, 0.33000947820757187,
                                           0.66999052179242813, 0.93056815579702629};
constexpr std::array<double, 4> kGaussW = {0.17392742256872693, 0.32607257743127307,
                                           0.32607257743127307, 0.17392742256872693};

using Vec8 = Eigen::Matrix<double, 8, 1>;

// Local element DOF order: [u1x, u1y, t1x, t1y, u2x, u2y, t2x, t2y]
// with theta_y = du_x/dz and theta_x = -du_y/dz.
void shape_rows(const Hermite& s, Vec8& nu, Vec8& nv, Vec8& npsi, Vec8& ntheta,
                Vec8& nddu, Vec8& nddv) {
    nu.setZero(); nv.setZero(); npsi.setZero(); ntheta.setZero();
    nddu.setZero(); nddv.setZero();
    const int ux[4] = {0, 3, 4, 7};   // u_x couples to (u1x, t1y, u2x, t2y)
    const int uy[4] = {1, 2, 5, 6};   // u_y couples to (u1y, t1x, u2y, t2x)
    const double sy[4] = {1.0, -1.0, 1.0, -1.0};  // theta_x = -du_y/dz
    for (int k = 0; k < 4; ++k) {
        nu(ux[k]) = s.h[k];
        nddu(ux[k]) = s.ddh[k];
        npsi(ux[k]) = s.dh[k];
        nv(uy[k]) = sy[k] * s.h[k];
        nddv(uy[k]) = sy[k] * s.ddh[k];
        ntheta(uy[k]) = -sy[k] * s.dh[k];
    }
}

}  // namespace

SystemMatrices assemble(const RotorModel& model) {
    validate(model);
    const int dof = model.dof();
    SystemMatrices sys;
    sys.dof = dof;
    sys.alpha = model.rayleigh.alpha;
    sys.beta = model.rayleigh.beta;
    sys.M0 = RealMatrix::Zero(dof, dof);
    sys.C1 = RealMatrix::Zero(dof, dof);
    sys.K0 = RealMatrix::Zero(dof, dof);
    sys.K1 = RealMatrix::Zero(dof, dof);
    sys.Mr = RealMatrix::Zero(dof, dof);
    sys.Kr = RealMatrix::Zero(dof, dof);
    sys.Cb = RealMatrix::Zero(dof, dof);

    for (const auto& seg : model.segments) {
        const double len = model.nodes[seg.end_node] - model.nodes[seg.start_node];
        const double od = seg.outer_diameter, id = seg.inner_diameter;
        const double area = M_PI / 4.0 * (od * od - id * id);
        const double second_moment =
            M_PI / 64.0 * (od * od * od * od - id * id * id * id);
        const double rho_a = seg.density * area;
        const double rho_i = seg.density * second_moment;
        const double rho_ip = 2.0 * rho_i;  // polar = 2 x diametral for a round shaft
        const double ei = seg.youngs_modulus * second_moment;

        Eigen::Matrix<double, 8, 8> me = Eigen::Matrix<double, 8, 8>::Zero();
        Eigen::Matrix<double, 8, 8> ge = me, ke = me;
        Vec8 nu, nv, npsi, ntheta, nddu, nddv;
        for (int g = 0; g < 4; ++g) {
            const Hermite s = hermite(kGaussX[g], len);
            shape_rows(s, nu, nv, npsi, ntheta, nddu, nddv);
            const double w = kGaussW[g] * len;
            me += w * (rho_a * (nu * nu.transpose() + nv * nv.transpose()) +
                       rho_i * (npsi * npsi.transpose() + ntheta * ntheta.transpose()));
            ke += w * ei * (nddu * nddu.transpose() + nddv * nddv.transpose());
            ge += w * rho_ip *
                  (ntheta * npsi.transpose() - npsi * ntheta.transpose());
        }

        const int base[2] = {4 * seg.start_node, 4 * seg.end_node};
        for (int a = 0; a < 8; ++a) {
            const int ga = base[a / 4] + a % 4;
            for (int b = 0; b < 8; ++b) {
                const int gb = base[b / 4] + b % 4;
                sys.Mr(ga, gb) += me(a, b);
                sys.Kr(ga, gb) += ke(a, b);
                sys.C1(ga, gb) += ge(a, b);
            }
        }
    }
    sys.M0 = sys.Mr;
    sys.K0 = sys.Kr;

    for (const auto& disk : model.disks) {
        const int base = 4 * disk.node;
        sys.M0(base, base) += disk.mass;
        sys.M0(base + 1, base + 1) += disk.mass;
        sys.M0(base + 2, base + 2) += disk.diametral_inertia;
        sys.M0(base + 3, base + 3) += disk.diametral_inertia;
        sys.C1(base + 2, base + 3) += disk.polar_inertia;
        sys.C1(base + 3, base + 2) -= disk.polar_inertia;
    }

    for (const auto& brg : model.bearings) {
        const int base = 4 * brg.node;
        const Eigen::Matrix2d ks = 0.5 * (brg.stiffness + brg.stiffness.transpose());
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                sys.K0(base + r, base + c) += ks(r, c);
                sys.Cb(base + r, base + c) += brg.damping(r, c);
                sys.K1(base + r, base + c) += brg.cross_stiffness(r, c);
            }
    }

    // enforce the symmetry pattern exactly
    sys.M0 = 0.5 * (sys.M0 + sys.M0.transpose()).eval();
    sys.Mr = 0.5 * (sys.Mr + sys.Mr.transpose()).eval();
    sys.K0 = 0.5 * (sys.K0 + sys.K0.transpose()).eval();
    sys.Kr = 0.5 * (sys.Kr + sys.Kr.transpose()).eval();
    sys.C1 = 0.5 * (sys.C1 - sys.C1.transpose()).eval();
    return sys;
}

PencilBlocks compose_pencil(const SystemMatrices& sys, double omega) {
    if (omega < 0.0) throw Error("compose_pencil: omega must be >= 0");
    PencilBlocks p;
    p.M = sys.M0;
    p.C = sys.damping_c0() + omega * sys.C1;
    p.K = sys.K0 + omega * sys.K1;
    return p;
}

}  // namespace rotarn
