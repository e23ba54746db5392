#ifndef SIGCAST_FACTORS_HPP
#define SIGCAST_FACTORS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigcast/timeseries.hpp"

namespace sigcast {

// Named column groups for per-group first-principal-component
// extraction. Groups may overlap; a group listing every column plays
// the role of a "global" factor.
struct FactorStructure {
    struct Group {
        std::string name;
        std::vector<std::string> columns;
    };
    std::vector<Group> groups;
};

struct PCAModel {
    struct GroupModel {
        std::string name;
        std::vector<std::string> columns;
        Eigen::VectorXd mean;
        Eigen::VectorXd scale;
        Eigen::VectorXd loading; // unit norm, largest-magnitude entry positive
    };
    std::vector<GroupModel> groups;
};

// First right singular vector of the column-standardized training rows,
// per group. Sign fixed so the loading's largest-magnitude entry is
// positive. Rows must be fully observed (fill upstream).
PCAModel fit_pca(const TimeSeriesFrame& frame, const FactorStructure& structure);

// Projects standardized rows onto each group loading; output frame has
// one column per group (named after the group).
TimeSeriesFrame pca_transform(const PCAModel& model, const TimeSeriesFrame& frame);

} // namespace sigcast

#endif
