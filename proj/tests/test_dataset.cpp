#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nnstne/dataset.hpp"
#include "support.hpp"

using namespace nnstne;

TEST_CASE("load_ucr reads back a two-line comma file") {
  testsup::TempDir tmp;
  const auto p = tmp.path("tiny.txt");
  testsup::write_file(p, "0,1,2,3\n1,4,5,6\n");
  const TimeSeriesDataset d = load_ucr(p);
  CHECK(d.n_samples() == 2);
  CHECK(d.series_length() == 3);
  CHECK(d.n_classes() == 2);
  CHECK(d.values(0, 0) == 1.0);
  CHECK(d.values(1, 2) == 6.0);
  CHECK(d.labels[0] == 0);
  CHECK(d.labels[1] == 1);
}

TEST_CASE("load_ucr rejects ragged rows") {
  testsup::TempDir tmp;
  const auto p = tmp.path("ragged.txt");
  testsup::write_file(p, "0,1,2,3,4\n1,5,6,7\n");
  CHECK_THROWS_AS(load_ucr(p), std::runtime_error);
}

TEST_CASE("load_ucr error paths") {
  testsup::TempDir tmp;
  SUBCASE("missing file") { CHECK_THROWS_AS(load_ucr(tmp.path("absent.txt")), std::runtime_error); }
  SUBCASE("empty file") {
    const auto p = tmp.path("empty.txt");
    testsup::write_file(p, "");
    CHECK_THROWS_AS(load_ucr(p), std::runtime_error);
  }
  SUBCASE("non-numeric token") {
    const auto p = tmp.path("bad.txt");
    testsup::write_file(p, "0,1,zap,3\n");
    CHECK_THROWS_AS(load_ucr(p), std::runtime_error);
  }
  SUBCASE("non-finite value") {
    const auto p = tmp.path("inf.txt");
    testsup::write_file(p, "0,1,inf,3\n");
    CHECK_THROWS_AS(load_ucr(p), std::runtime_error);
  }
  SUBCASE("non-integral label") {
    const auto p = tmp.path("lbl.txt");
    testsup::write_file(p, "0.5,1,2,3\n");
    CHECK_THROWS_AS(load_ucr(p), std::runtime_error);
  }
}

TEST_CASE("load_ucr accepts tabs, float-coded labels and blank lines") {
  testsup::TempDir tmp;
  const auto p = tmp.path("tabs.tsv");
  testsup::write_file(p, "1.0\t0.5\t-2\t3e1\n\n2.0\t1\t2\t3\n");
  const TimeSeriesDataset d = load_ucr(p);  // auto-detected delimiter
  CHECK(d.n_samples() == 2);
  CHECK(d.labels[0] == 1);
  CHECK(d.labels[1] == 2);
  CHECK(d.values(0, 2) == 30.0);
}

TEST_CASE("load/save round-trips values and labels") {
  std::mt19937_64 rng(7);
  const TimeSeriesDataset d = testsup::random_dataset(rng, 13, 9, 3);
  testsup::TempDir tmp;
  const auto p = tmp.path("round.txt");
  save_ucr(d, p);
  const TimeSeriesDataset back = load_ucr(p);
  REQUIRE(back.n_samples() == d.n_samples());
  REQUIRE(back.series_length() == d.series_length());
  CHECK((back.values - d.values).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(back.labels == d.labels);
}

TEST_CASE("merge concatenates splits") {
  std::mt19937_64 rng(3);
  const TimeSeriesDataset a = testsup::random_dataset(rng, 100, 16);
  const TimeSeriesDataset b = testsup::random_dataset(rng, 100, 16);
  const TimeSeriesDataset m = merge(a, b);
  CHECK(m.n_samples() == 200);
  CHECK(m.values.topRows(100) == a.values);
  CHECK(m.values.bottomRows(100) == b.values);
  CHECK(m.labels.size() == 200);
}

TEST_CASE("merge with an empty dataset is the identity") {
  std::mt19937_64 rng(4);
  const TimeSeriesDataset a = testsup::random_dataset(rng, 5, 8);
  const TimeSeriesDataset m = merge(a, TimeSeriesDataset{});
  CHECK(m.values == a.values);
  CHECK(m.labels == a.labels);
  const TimeSeriesDataset m2 = merge(TimeSeriesDataset{}, a);
  CHECK(m2.values == a.values);
}

TEST_CASE("merge rejects incompatible splits") {
  std::mt19937_64 rng(5);
  const TimeSeriesDataset a = testsup::random_dataset(rng, 4, 96);
  const TimeSeriesDataset b = testsup::random_dataset(rng, 4, 128);
  CHECK_THROWS_AS(merge(a, b), std::runtime_error);

  TimeSeriesDataset unlabeled = testsup::random_dataset(rng, 4, 96);
  unlabeled.labels.clear();
  CHECK_THROWS_AS(merge(a, unlabeled), std::runtime_error);
}

TEST_CASE("znormalize hand values") {
  Eigen::VectorXd v(3);
  v << 1, 2, 3;
  const Eigen::VectorXd z = znormalize(v);
  // mean 2, population std sqrt(2/3)
  CHECK(z[0] == doctest::Approx(-1.224744871391589).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z[2] == doctest::Approx(1.224744871391589).epsilon(1e-12));
}

TEST_CASE("znormalize degenerate and idempotent cases") {
  Eigen::VectorXd c(3);
  c << 5, 5, 5;
  CHECK(znormalize(c).isZero(0.0));

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::VectorXd v = testsup::random_vector(rng, 2 + static_cast<int>(rng() % 40));
    const Eigen::VectorXd z = znormalize(v);
    CHECK(std::abs(z.mean()) <= 1e-10);
    const double pop_std = std::sqrt(z.squaredNorm() / static_cast<double>(z.size()));
    CHECK(std::abs(pop_std - 1.0) <= 1e-10);
    CHECK((znormalize(z) - z).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("minmax_normalize") {
  Eigen::VectorXd v(3);
  v << 2, 4, 6;
  const Eigen::VectorXd m = minmax_normalize(v);
  CHECK(m[0] == 0.0);
  CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m[2] == 1.0);

  Eigen::VectorXd c(2);
  c << 7, 7;
  CHECK(minmax_normalize(c).isZero(0.0));

  CHECK((minmax_normalize(m) - m).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("slide_windows shapes and content") {
  std::mt19937_64 rng(13);
  SUBCASE("J formula") {
    const TimeSeriesDataset d = testsup::random_dataset(rng, 2, 5);
    const WindowSet ws = slide_windows(d, 3);
    CHECK(ws.windows_per_series == 3);
    CHECK(ws.n_series() == 2);
  }
  SUBCASE("window content") {
    TimeSeriesDataset d;
    d.values.resize(1, 4);
    d.values << 1, 2, 3, 4;
    const WindowSet ws = slide_windows(d, 2);
    REQUIRE(ws.windows_per_series == 3);
    CHECK(ws.window(0, 0) == (Eigen::VectorXd(2) << 1, 2).finished());
    CHECK(ws.window(0, 1) == (Eigen::VectorXd(2) << 2, 3).finished());
    CHECK(ws.window(0, 2) == (Eigen::VectorXd(2) << 3, 4).finished());
  }
  SUBCASE("M equal to Q gives one full window") {
    const TimeSeriesDataset d = testsup::random_dataset(rng, 3, 6);
    const WindowSet ws = slide_windows(d, 6);
    CHECK(ws.windows_per_series == 1);
    CHECK(ws.window(1, 0) == d.values.row(1).transpose());
  }
  SUBCASE("M out of range") {
    const TimeSeriesDataset d = testsup::random_dataset(rng, 2, 5);
    CHECK_THROWS_AS(slide_windows(d, 1), std::invalid_argument);
    CHECK_THROWS_AS(slide_windows(d, 6), std::invalid_argument);
  }
  SUBCASE("J = Q - M + 1 for random shapes") {
    for (int rep = 0; rep < 20; ++rep) {
      const int q = 4 + static_cast<int>(rng() % 30);
      const int m = 2 + static_cast<int>(rng() % (q - 1));
      const TimeSeriesDataset d = testsup::random_dataset(rng, 2, q);
      CHECK(slide_windows(d, m).windows_per_series == q - m + 1);
    }
  }
}

TEST_CASE("apply_preprocess modes") {
  std::mt19937_64 rng(17);
  const TimeSeriesDataset d = testsup::random_dataset(rng, 3, 10);
  const TimeSeriesDataset z = apply_preprocess(d, Preprocess::zscore);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(z.values.row(i).mean()) <= 1e-10);
  const TimeSeriesDataset m = apply_preprocess(d, Preprocess::minmax);
  CHECK(m.values.minCoeff() >= 0.0);
  CHECK(m.values.maxCoeff() <= 1.0);
  CHECK(apply_preprocess(d, Preprocess::none).values == d.values);
}
