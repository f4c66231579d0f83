#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace hcs {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using json = nlohmann::ordered_json;

inline constexpr cplx I_unit{0.0, 1.0};

// Module errors carry a stable code plus structured detail so the CLI can
// emit them as machine-readable JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what, json detail = json::object())
        : std::runtime_error(what), code_(std::move(code)), detail_(std::move(detail)) {}
    const std::string& code() const { return code_; }
    const json& detail() const { return detail_; }

private:
    std::string code_;
    json detail_;
};

inline double max_abs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace hcs
