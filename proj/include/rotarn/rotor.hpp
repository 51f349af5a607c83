#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rotarn/linalg.hpp"

namespace rotarn {

// 4 DOF per node, ordered [u_x, u_y, theta_x, theta_y]: two lateral
// translations and the two bending rotations (theta_x about the x axis,
// theta_y about the y axis). Units are SI throughout.

struct ShaftSegment {
    int start_node = 0;
    int end_node = 0;
    double outer_diameter = 0.0;  // m
    double inner_diameter = 0.0;  // m
    double density = 0.0;         // kg/m^3
    double youngs_modulus = 0.0;  // Pa
};

struct Disk {
    int node = 0;
    double mass = 0.0;              // kg
    double polar_inertia = 0.0;     // kg m^2
    double diametral_inertia = 0.0; // kg m^2
};

struct Bearing {
    int node = 0;
    Eigen::Matrix2d stiffness = Eigen::Matrix2d::Zero();        // N/m, symmetric
    Eigen::Matrix2d damping = Eigen::Matrix2d::Zero();          // N s/m
    Eigen::Matrix2d cross_stiffness = Eigen::Matrix2d::Zero();  // N/m, speed-proportional
};

struct RayleighCoefficients {
    double alpha = 0.0;  // 1/s
    double beta = 0.0;   // s
};

struct RotorModel {
    std::string name;
    std::vector<double> nodes;  // axial positions, strictly increasing
    std::vector<ShaftSegment> segments;
    std::vector<Disk> disks;
    std::vector<Bearing> bearings;
    RayleighCoefficients rayleigh;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int dof() const { return 4 * node_count(); }
};

class ModelError : public Error {
public:
    using Error::Error;
};

RotorModel parse_model(const nlohmann::json& doc);
RotorModel load_model(const std::string& path);
void validate(const RotorModel& model);

/// Speed-independent assembled blocks. All real-valued; M0, K0
/// symmetric, C1 skew-symmetric by construction.
struct SystemMatrices {
    RealMatrix M0;  // shaft + disk mass
    RealMatrix C1;  // shaft + disk gyroscopic coupling
    RealMatrix K0;  // shaft bending + bearing direct stiffness
    RealMatrix K1;  // bearing cross-coupled stiffness
    RealMatrix Mr;  // shaft-only mass
    RealMatrix Kr;  // shaft-only stiffness
    RealMatrix Cb;  // bearing damping
    double alpha = 0.0;
    double beta = 0.0;
    int dof = 0;

    /// Proportional + bearing damping at zero speed.
    RealMatrix damping_c0() const { return alpha * Mr + beta * Kr + Cb; }
};

SystemMatrices assemble(const RotorModel& model);

struct PencilBlocks {
    RealMatrix M, C, K;
};

/// M = M0; C = alpha*Mr + beta*Kr + Cb + omega*C1; K = K0 + omega*K1.
PencilBlocks compose_pencil(const SystemMatrices& sys, double omega);

}  // namespace rotarn
