#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lfiqa/lf.hpp"
#include "table2_data.hpp"
#include "test_util.hpp"

using testutil::CliResult;
using testutil::run_cli;
using testutil::TempDir;

namespace {

// Pulls "key=1.234567" out of a score line.
double field(const std::string& line, const std::string& key) {
    auto pos = line.find(key + "=");
    REQUIRE(pos != std::string::npos);
    return std::stod(line.substr(pos + key.size() + 1));
}

void write_pair(const TempDir& dir, const std::string& ref_name, const std::string& dist_name,
                int w, int h, double noise_sigma, uint32_t seed) {
    lfiqa::LumaImage ref = testutil::smooth_image(w, h);
    lfiqa::LumaImage dist = testutil::add_gaussian_noise(ref, noise_sigma, seed);
    auto to_bmp = [&](const lfiqa::LumaImage& img, const std::string& name) {
        testutil::write_bytes(dir.file(name),
                              testutil::bmp8_gray_bytes(img.width, img.height, [&](int x, int y) {
                                  return uint8_t(std::lround(img.at(x, y)));
                              }));
    };
    to_bmp(ref, ref_name);
    to_bmp(dist, dist_name);
}

std::string quoted(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

} // namespace

TEST_CASE("score command on identical images") {
    TempDir dir;
    write_pair(dir, "ref.bmp", "unused.bmp", 64, 64, 0.0, 1);
    auto ref = quoted(dir.file("ref.bmp"));

    CliResult ssim = run_cli("score --metric ssim " + ref + " " + ref);
    CHECK(ssim.exit_code == 0);
    CHECK(ssim.out.find("metric=ssim") != std::string::npos);
    CHECK(ssim.out.find("raw=1.000000") != std::string::npos);
    CHECK(ssim.out.find("lf=1.000000") != std::string::npos);

    CliResult gmsd = run_cli("score --metric gmsd " + ref + " " + ref);
    CHECK(gmsd.exit_code == 0);
    CHECK(gmsd.out.find("raw=0.000000") != std::string::npos);
    CHECK(gmsd.out.find("similarity=1.000000") != std::string::npos);
    CHECK(gmsd.out.find("lf=1.000000") != std::string::npos);

    CliResult msssim = run_cli("score --metric ms-ssim " + ref + " " + ref);
    CHECK(msssim.exit_code == 0);
    CHECK(field(msssim.out, "raw") == doctest::Approx(1.0));
}

TEST_CASE("score lf column equals eq1 of the similarity") {
    TempDir dir;
    write_pair(dir, "ref.bmp", "dist.bmp", 96, 80, 9.0, 2);
    CliResult r = run_cli("score --metric ssim --lf eq1 " + quoted(dir.file("ref.bmp")) + " " +
                          quoted(dir.file("dist.bmp")));
    REQUIRE(r.exit_code == 0);
    double sim = field(r.out, "similarity");
    double lf = field(r.out, "lf");
    CHECK(lf == doctest::Approx(1.0 - std::sqrt(1.0 - sim)).epsilon(1e-5));
    CHECK(sim < 1.0);

    CliResult none = run_cli("score --metric ssim --lf none " + quoted(dir.file("ref.bmp")) +
                             " " + quoted(dir.file("dist.bmp")));
    CHECK(none.exit_code == 0);
    CHECK(none.out.find("lf=") == std::string::npos);

    CliResult pw = run_cli("score --metric ssim --lf eq1 --lf-mode per-window " +
                           quoted(dir.file("ref.bmp")) + " " + quoted(dir.file("dist.bmp")));
    REQUIRE(pw.exit_code == 0);
    CHECK(field(pw.out, "lf") >= lf - 1e-6); // Jensen: per-window >= final for eq1

    CliResult bad = run_cli("score --metric gmsd --lf eq1 --lf-mode per-window " +
                            quoted(dir.file("ref.bmp")) + " " + quoted(dir.file("dist.bmp")));
    CHECK(bad.exit_code != 0);
}

TEST_CASE("score command failure modes") {
    TempDir dir;
    write_pair(dir, "a.bmp", "b.bmp", 32, 32, 3.0, 3);
    write_pair(dir, "c.bmp", "d.bmp", 48, 32, 3.0, 4);

    CliResult missing = run_cli("score --metric ssim " + quoted(dir.file("a.bmp")) + " " +
                                quoted(dir.file("nope.bmp")));
    CHECK(missing.exit_code != 0);
    CHECK(missing.err.find("error:") != std::string::npos);

    CliResult mismatch = run_cli("score --metric ssim " + quoted(dir.file("a.bmp")) + " " +
                                 quoted(dir.file("c.bmp")));
    CHECK(mismatch.exit_code != 0);
    CHECK(mismatch.err.find("dimension mismatch") != std::string::npos);

    CliResult unknown = run_cli("score --metric vif " + quoted(dir.file("a.bmp")) + " " +
                                quoted(dir.file("b.bmp")));
    CHECK(unknown.exit_code != 0);
}

TEST_CASE("evaluate command produces a deterministic report") {
    TempDir dir;
    // four records, one shared reference per pair, generic-csv manifest
    std::ostringstream manifest;
    manifest << "reference_id,distorted_id,mos\n";
    double sigmas[4] = {2.0, 6.0, 12.0, 24.0};
    double mos[4] = {7.0, 5.5, 3.5, 1.5};
    for (int i = 0; i < 4; ++i) {
        std::string ref = "ref" + std::to_string(i) + ".bmp";
        std::string dist = "dist" + std::to_string(i) + ".bmp";
        write_pair(dir, ref, dist, 96, 96, sigmas[i], uint32_t(10 + i));
        manifest << ref << "," << dist << "," << mos[i] << "\n";
    }
    testutil::write_file(dir.file("set.csv"), manifest.str());

    // ingested scores for two of the four records (partial set)
    testutil::write_file(dir.file("vsi.csv"), "distorted_id,score\ndist0.bmp,0.98\n"
                                              "dist1.bmp,0.91\ndist2.bmp,0.75\n");

    std::string base = "evaluate --manifest " + quoted(dir.file("set.csv")) +
                       " --format generic-csv --mos-scale 8 --images " + quoted(dir.path()) +
                       " --metrics ssim,ms-ssim,gmsd --ingest vsi:higher:0:1:" +
                       dir.file("vsi.csv").string() + " --out " + quoted(dir.file("report.csv"));
    CliResult r1 = run_cli(base);
    REQUIRE_MESSAGE(r1.exit_code == 0, r1.err);
    std::string report = testutil::read_file(dir.file("report.csv"));
    CHECK(report.find("metric,plcc_raw,plcc_lf,n_pairs\n") == 0);
    CHECK(report.find("ssim,") != std::string::npos);
    CHECK(report.find("ms-ssim,") != std::string::npos);
    CHECK(report.find("gmsd,") != std::string::npos);
    CHECK(report.find("vsi,") != std::string::npos);
    CHECK(r1.err.find("skipped 1") != std::string::npos); // vsi covers 3 of 4

    // idempotent: byte-identical on rerun
    CliResult r2 = run_cli(base);
    CHECK(r2.exit_code == 0);
    CHECK(testutil::read_file(dir.file("report.csv")) == report);

    // empty metric selection is a usage error
    CliResult empty = run_cli("evaluate --manifest " + quoted(dir.file("set.csv")) +
                              " --format generic-csv --mos-scale 8 --out " +
                              quoted(dir.file("r.csv")));
    CHECK(empty.exit_code != 0);

    // constant-series metric degrades to an error for that metric
    testutil::write_file(dir.file("flat.csv"),
                         "distorted_id,score\ndist0.bmp,0.5\ndist1.bmp,0.5\n"
                         "dist2.bmp,0.5\ndist3.bmp,0.5\n");
    CliResult flat = run_cli("evaluate --manifest " + quoted(dir.file("set.csv")) +
                             " --format generic-csv --mos-scale 8 --ingest flat:higher:0:1:" +
                             dir.file("flat.csv").string() + " --out " +
                             quoted(dir.file("r2.csv")));
    CHECK(flat.exit_code != 0); // sole metric failed -> no report
    CHECK(flat.err.find("constant series") != std::string::npos);
}

TEST_CASE("precision command replicates the published probe tables") {
    TempDir dir;
    // manifest from the Table 2 rows (tid format), scores ingested
    std::ostringstream manifest, scores, probes;
    scores << "distorted_id,score\n";
    auto emit = [&](const table2::Row& row, double target) {
        manifest << row.mos << " " << row.id << "\n";
        scores << row.id << "," << row.ssim << "\n";
        probes << target << " " << row.id << "\n";
    };
    for (const auto& row : table2::good)
        emit(row, 6.0);
    for (const auto& row : table2::middle)
        emit(row, 4.0);
    for (const auto& row : table2::bad)
        emit(row, 2.0);
    testutil::write_file(dir.file("mos.txt"), manifest.str());
    testutil::write_file(dir.file("ssim.csv"), scores.str());
    testutil::write_file(dir.file("probes.txt"), probes.str());

    CliResult r = run_cli("precision --manifest " + quoted(dir.file("mos.txt")) +
                          " --metric ssim-pre --ingest ssim-pre:higher:0:1:" +
                          dir.file("ssim.csv").string() + " --probe-list " +
                          quoted(dir.file("probes.txt")) + " --lf eq1 --out " +
                          quoted(dir.file("precision.csv")));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    // membership echo includes Table-2-style rows
    CHECK(r.out.find("i01_02_2.bmp 6.108110 0.994849") != std::string::npos);

    std::string csv = testutil::read_file(dir.file("precision.csv"));
    CHECK(csv.find("pair,mos_resolution,raw_resolution,lf_resolution\n") == 0);
    CHECK(csv.find("good-middle,0.229580,0.020124,") != std::string::npos);
    CHECK(csv.find("middle-bad,0.231580,0.089206,") != std::string::npos);

    // the LF resolutions match the published 0.0936 / 0.1773 within 5e-4
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line); // header
    std::getline(lines, line);
    double gm_lf = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(gm_lf == doctest::Approx(table2::good_middle_res[2]).epsilon(5e-4));
    std::getline(lines, line);
    double mb_lf = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(mb_lf == doctest::Approx(table2::middle_bad_res[2]).epsilon(5e-4));

    // n = 0 without a probe list is a usage error
    CliResult zero = run_cli("precision --manifest " + quoted(dir.file("mos.txt")) +
                             " --metric ssim-pre --ingest ssim-pre:higher:0:1:" +
                             dir.file("ssim.csv").string() + " --n 0 --out " +
                             quoted(dir.file("p.csv")));
    CHECK(zero.exit_code != 0);
}

TEST_CASE("scatter command writes raw and lf files") {
    TempDir dir;
    std::ostringstream manifest, scores;
    scores << "distorted_id,score\n";
    for (int i = 0; i < 10; ++i) {
        std::string id = "img" + std::to_string(i) + "_1.bmp";
        manifest << (0.5 + 0.7 * i) << " " << id << "\n";
        scores << id << "," << (0.3 + 0.07 * i) << "\n";
    }
    testutil::write_file(dir.file("mos.txt"), manifest.str());
    testutil::write_file(dir.file("m.csv"), scores.str());
    auto out_dir = dir.file("plots");

    CliResult r = run_cli("scatter --manifest " + quoted(dir.file("mos.txt")) +
                          " --ingest m:higher:0:1:" + dir.file("m.csv").string() +
                          " --lf eq1 --svg --out-dir " + quoted(out_dir));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    std::string raw_csv = testutil::read_file(out_dir / "scatter_m_raw.csv");
    std::string lf_csv = testutil::read_file(out_dir / "scatter_m_lf.csv");
    CHECK(std::count(raw_csv.begin(), raw_csv.end(), '\n') == 11); // header + 10 rows
    CHECK(std::count(lf_csv.begin(), lf_csv.end(), '\n') == 11);
    CHECK(testutil::read_file(out_dir / "scatter_m_raw.svg").find("<svg") == 0);

    // LF column is eq1 of the raw column, row by row
    auto column = [](const std::string& csv) {
        std::vector<double> values;
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) {
            size_t first = line.find(','), second = line.find(',', first + 1);
            values.push_back(std::stod(line.substr(first + 1, second - first - 1)));
        }
        return values;
    };
    auto raw_col = column(raw_csv);
    auto lf_col = column(lf_csv);
    REQUIRE(raw_col.size() == 10);
    for (size_t i = 0; i < raw_col.size(); ++i)
        CHECK(lf_col[i] == doctest::Approx(1.0 - std::sqrt(1.0 - raw_col[i])).epsilon(1e-5));

    // no metrics selected -> usage error
    CliResult none = run_cli("scatter --manifest " + quoted(dir.file("mos.txt")) +
                             " --svg --out-dir " + quoted(out_dir));
    CHECK(none.exit_code != 0);
}
