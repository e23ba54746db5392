#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sigcast/factors.hpp"
#include "oracles.hpp"

using namespace sigcast;

namespace {

TimeSeriesFrame make_frame(const std::vector<std::string>& cols, const Eigen::MatrixXd& values) {
    TimeSeriesFrame f;
    f.columns = cols;
    f.values = values;
    for (int i = 0; i < values.rows(); ++i) f.timestamps.push_back(i);
    return f;
}

} // namespace

TEST_CASE("perfectly correlated pair loads equally") {
    Eigen::MatrixXd M(6, 2);
    for (int i = 0; i < 6; ++i) {
        M(i, 0) = i;
        M(i, 1) = 3.0 * i + 2.0; // same standardized column
    }
    auto frame = make_frame({"a", "b"}, M);
    FactorStructure fs;
    fs.groups.push_back({"pair", {"a", "b"}});
    auto model = fit_pca(frame, fs);
    REQUIRE(model.groups.size() == 1);
    const auto& g = model.groups[0];
    CHECK(g.loading.size() == 2);
    CHECK(g.loading[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(g.loading[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(g.loading.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("loading matches a dense SVD oracle") {
    auto rng = oracles::rng(71);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 40, p = 5;
    Eigen::MatrixXd M(n, p);
    for (int i = 0; i < n; ++i) {
        double common = gauss(rng);
        for (int j = 0; j < p; ++j) M(i, j) = (1.0 + 0.2 * j) * common + 0.3 * gauss(rng);
    }
    std::vector<std::string> cols{"c0", "c1", "c2", "c3", "c4"};
    auto frame = make_frame(cols, M);
    FactorStructure fs;
    fs.groups.push_back({"g", cols});
    auto model = fit_pca(frame, fs);
    const auto& gm = model.groups[0];

    // oracle: eigenvector of the standardized Gram matrix
    Eigen::RowVectorXd mean = M.colwise().mean();
    Eigen::MatrixXd Z = M.rowwise() - mean;
    for (int j = 0; j < p; ++j) Z.col(j) /= std::sqrt(Z.col(j).squaredNorm() / n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Z.transpose() * Z);
    Eigen::VectorXd v = eig.eigenvectors().col(p - 1); // largest eigenvalue last
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
    CHECK((gm.loading - v).cwiseAbs().maxCoeff() <= 1e-8);
    // sign convention: largest-magnitude entry positive
    gm.loading.cwiseAbs().maxCoeff(&imax);
    CHECK(gm.loading[imax] > 0);
}

TEST_CASE("transform projects standardized rows onto the loading") {
    Eigen::MatrixXd M(10, 3);
    auto rng = oracles::rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) = gauss(rng);
    std::vector<std::string> cols{"a", "b", "c"};
    auto frame = make_frame(cols, M);
    FactorStructure fs;
    fs.groups.push_back({"f1", cols});
    fs.groups.push_back({"f2", {"a", "b"}});
    auto model = fit_pca(frame, fs);
    auto out = pca_transform(model, frame);
    REQUIRE(out.cols() == 2);
    CHECK(out.columns == std::vector<std::string>{"f1", "f2"});
    CHECK(out.rows() == 10);
    for (int i = 0; i < 10; ++i) {
        const auto& gm = model.groups[0];
        Eigen::VectorXd z(3);
        for (int j = 0; j < 3; ++j) z[j] = (M(i, j) - gm.mean[j]) / gm.scale[j];
        CHECK(out.values(i, 0) == doctest::Approx(z.dot(gm.loading)).epsilon(1e-10));
    }

    // the model applies unchanged to unseen rows (no refit inside transform)
    TimeSeriesFrame other = frame;
    other.values.array() += 1.0;
    auto out2 = pca_transform(model, other);
    CHECK(out2.values.rows() == 10);
}

TEST_CASE("error cases name the offending group") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Constant(5, 2, 3.0);
    auto frame = make_frame({"a", "b"}, M);
    FactorStructure fs;
    fs.groups.push_back({"flat", {"a", "b"}});
    try {
        fit_pca(frame, fs);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("'flat'") != std::string::npos);
    }

    FactorStructure missing;
    missing.groups.push_back({"g", {"a", "zzz"}});
    CHECK_THROWS_AS(fit_pca(frame, missing), std::invalid_argument);

    FactorStructure tiny;
    tiny.groups.push_back({"g", {"a"}});
    CHECK_THROWS_AS(fit_pca(frame, tiny), std::invalid_argument);

    CHECK_THROWS_AS(fit_pca(frame, FactorStructure{}), std::invalid_argument);

    Eigen::MatrixXd with_nan = M;
    with_nan.col(0).setLinSpaced(5, 0, 1);
    with_nan(2, 1) = std::nan("");
    auto nan_frame = make_frame({"a", "b"}, with_nan);
    FactorStructure fs2;
    fs2.groups.push_back({"g", {"a", "b"}});
    CHECK_THROWS_AS(fit_pca(nan_frame, fs2), std::invalid_argument);
}
