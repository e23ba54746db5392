#include "sigcast/factors.hpp"

#include <cmath>
#include <stdexcept>

namespace sigcast {

PCAModel fit_pca(const TimeSeriesFrame& frame, const FactorStructure& structure) {
    if (structure.groups.empty()) throw std::invalid_argument("fit_pca: no factor groups");
    PCAModel model;
    for (const auto& g : structure.groups) {
        if (g.columns.size() < 2)
            throw std::invalid_argument("fit_pca: group '" + g.name + "' needs at least 2 columns");
        PCAModel::GroupModel gm;
        gm.name = g.name;
        gm.columns = g.columns;
        const Eigen::Index n = frame.rows(), p = static_cast<Eigen::Index>(g.columns.size());
        if (n < 2) throw std::invalid_argument("fit_pca: need at least 2 rows");
        Eigen::MatrixXd M(n, p);
        for (Eigen::Index j = 0; j < p; ++j) {
            int c = frame.column_index(g.columns[static_cast<std::size_t>(j)]);
            if (c < 0)
                throw std::invalid_argument("fit_pca: group '" + g.name + "' references unknown column '" +
                                            g.columns[static_cast<std::size_t>(j)] + "'");
            M.col(j) = frame.values.col(c);
        }
        if (!M.allFinite()) throw std::invalid_argument("fit_pca: group '" + g.name + "' has missing values");
        gm.mean = M.colwise().mean();
        gm.scale.resize(p);
        bool any_varying = false;
        for (Eigen::Index j = 0; j < p; ++j) {
            double sd = std::sqrt((M.col(j).array() - gm.mean[j]).square().mean());
            gm.scale[j] = sd > 0 ? sd : 1.0;
            any_varying = any_varying || sd > 0;
        }
        if (!any_varying) throw std::invalid_argument("fit_pca: group '" + g.name + "' is all-constant");
        Eigen::MatrixXd Z = (M.rowwise() - gm.mean.transpose()).array().rowwise() / gm.scale.transpose().array();
        Eigen::BDCSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinV);
        gm.loading = svd.matrixV().col(0);
        Eigen::Index imax;
        gm.loading.cwiseAbs().maxCoeff(&imax);
        if (gm.loading[imax] < 0) gm.loading = -gm.loading;
        model.groups.push_back(std::move(gm));
    }
    return model;
}

TimeSeriesFrame pca_transform(const PCAModel& model, const TimeSeriesFrame& frame) {
    TimeSeriesFrame out;
    out.timestamps = frame.timestamps;
    out.dated = frame.dated;
    out.values.resize(frame.rows(), static_cast<Eigen::Index>(model.groups.size()));
    for (std::size_t k = 0; k < model.groups.size(); ++k) {
        const auto& gm = model.groups[k];
        out.columns.push_back(gm.name);
        Eigen::MatrixXd M(frame.rows(), static_cast<Eigen::Index>(gm.columns.size()));
        for (std::size_t j = 0; j < gm.columns.size(); ++j) {
            int c = frame.column_index(gm.columns[j]);
            if (c < 0) throw std::invalid_argument("pca_transform: unknown column '" + gm.columns[j] + "'");
            M.col(static_cast<Eigen::Index>(j)) = frame.values.col(c);
        }
        Eigen::MatrixXd Z = (M.rowwise() - gm.mean.transpose()).array().rowwise() / gm.scale.transpose().array();
        out.values.col(static_cast<Eigen::Index>(k)) = Z * gm.loading;
    }
    return out;
}

} // namespace sigcast
