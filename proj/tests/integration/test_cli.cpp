// End-to-end checks of the command-line surface: exit codes, report files,
// error messages, config-file precedence.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsf/harness.hpp"
#include "tsf/pipeline.hpp"

#ifndef TSF_DATA_DIR
#define TSF_DATA_DIR "data"
#endif
#ifndef TSF_CLI_PATH
#define TSF_CLI_PATH "tsforecast"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok    %s\n", what.c_str());
    } else {
        ++g_failures;
        std::printf("FAIL  %s\n", what.c_str());
    }
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    RunResult result;
    const std::string cmd = std::string(TSF_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
        result.output.append(buf.data(), n);
        if (n < buf.size()) break;
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    return json::parse(in);
}

const std::string kData = TSF_DATA_DIR;

void test_forecast_naive_oracle(const fs::path& dir) {
    const std::string report = (dir / "arima_report.json").string();
    const RunResult r = run_cli("forecast --input " + kData +
                                "/nonlinear_tanh.csv --model arima --arima-order 0,1,0 "
                                "--out " + (dir / "arima_forecast.csv").string() + " --report " +
                                report);
    expect(r.exit_code == 0, "forecast arima (0,1,0) exits 0");

    // independent naive-forecast oracle on the same split
    const tsf::SeriesFrame frame = tsf::load_series(kData + "/nonlinear_tanh.csv", "Adj Close");
    auto [train, test] = tsf::split(frame, 0.70);
    double sq = 0.0;
    double prev = train.values.back();
    for (double v : test.values) {
        sq += (v - prev) * (v - prev);
        prev = v;
    }
    const double naive_rmse = std::sqrt(sq / static_cast<double>(test.size()));

    const json j = load_json(report);
    expect(std::abs(j["rmse"].get<double>() - naive_rmse) < 1e-12,
           "reported RMSE equals the independent naive lag-1 RMSE");
    expect(j["n_test"].get<std::size_t>() == test.size(), "report carries the test length");
    expect(j.contains("config") && j["config"].contains("seed"),
           "report echoes the effective config");
}

void test_missing_column() {
    const RunResult r = run_cli("forecast --input " + kData +
                                "/nonlinear_tanh.csv --model lstm --column 'Closing Price'");
    expect(r.exit_code != 0, "missing column exits nonzero");
    expect(r.output.find("Closing Price") != std::string::npos,
           "missing-column message names the column");
}

void test_telemetry(const fs::path& dir) {
    const std::string trace = (dir / "trace.csv").string();
    const std::string summary = (dir / "summary.json").string();
    const RunResult r = run_cli("telemetry --input " + kData +
                                "/synthetic_price.csv --model lstm --epochs 2 --trace " + trace +
                                " --summary " + summary);
    expect(r.exit_code == 0, "telemetry exits 0");

    // trace rows: header + epochs * ceil(samples / batch)
    std::ifstream in(trace);
    std::string line;
    std::getline(in, line);
    expect(line == "epoch,batch_step,loss", "trace header is epoch,batch_step,loss");
    std::vector<double> epoch1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream ss(line);
        std::string epoch, step, loss;
        std::getline(ss, epoch, ',');
        std::getline(ss, step, ',');
        std::getline(ss, loss, ',');
        if (epoch == "1") epoch1.push_back(std::stod(loss));
    }
    const tsf::SeriesFrame frame = tsf::load_series(kData + "/synthetic_price.csv", "Adj Close");
    const std::size_t samples = tsf::split_spec(frame.size(), 0.70).train_len - 1;
    const std::size_t batches = (samples + 31) / 32;
    expect(rows == 2 * batches, "trace row count is epochs x batches per epoch");

    const json j = load_json(summary);
    expect(j["epochs"].size() == 2, "summary has one row per epoch");
    // recompute epoch-1 population sd from the trace file
    double mean = 0.0;
    for (double v : epoch1) mean += v;
    mean /= static_cast<double>(epoch1.size());
    double var = 0.0;
    for (double v : epoch1) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(epoch1.size()));
    expect(std::abs(j["epochs"][0]["sd"].get<double>() - sd) < 1e-12,
           "summary sd equals the sd recomputed from the trace file");
    expect(j["epochs"][0]["n_batches"].get<std::size_t>() == batches,
           "summary batch count matches the trace");
}

void test_compare_subset(const fs::path& dir) {
    const std::string report = (dir / "subset.json").string();
    const RunResult r = run_cli("compare --input " + kData +
                                "/nonlinear_regime.csv --models lstm,bilstm --epochs 4 "
                                "--report " + report);
    expect(r.exit_code == 0, "compare with two models exits 0");
    const json j = load_json(report);
    expect(j["rows"].size() == 1, "one row per input series");
    expect(j["rows"][0]["rmse_arima"].is_null(), "unselected model column is null");
    expect(j["rows"][0]["pct_bilstm_over_lstm"].is_number(),
           "selected pair percentage is present");
    expect(j["failures"].empty(), "no failures recorded");
}

void test_compare_failure(const fs::path& dir) {
    const std::string report = (dir / "failing.json").string();
    // order (30,1,30) needs 610 differenced points; the 490-point train
    // segment cannot satisfy the fit floor, so the arima run must fail.
    const RunResult r = run_cli("compare --input " + kData +
                                "/nonlinear_regime.csv --models arima,lstm --epochs 2 "
                                "--arima-order 30,1,30 --report " + report);
    expect(r.exit_code != 0, "per-series model failure makes the exit nonzero");
    const json j = load_json(report);
    expect(!j["failures"].empty(), "failure is recorded in the report");
    expect(j["failures"][0]["model"] == "arima", "failure names the model");
}

void test_config_file_precedence(const fs::path& dir) {
    const fs::path cfg = dir / "run.ini";
    {
        std::ofstream out(cfg);
        out << "[telemetry]\nepochs=3\nneurons=5\n";
    }
    const std::string summary = (dir / "cfg_summary.json").string();
    const RunResult r = run_cli("--config " + cfg.string() + " telemetry --input " + kData +
                                "/synthetic_price.csv --model lstm --epochs 2 --trace " +
                                (dir / "cfg_trace.csv").string() + " --summary " + summary);
    expect(r.exit_code == 0, "telemetry with config file exits 0");
    const json j = load_json(summary);
    expect(j["epochs"].size() == 2, "command-line flag overrides the config file");
    expect(j["config"]["neurons"] == "5", "config-file value applies when no flag is given");
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "tsf_cli_integration";
    fs::remove_all(dir);
    fs::create_directories(dir);

    test_forecast_naive_oracle(dir);
    test_missing_column();
    test_telemetry(dir);
    test_compare_subset(dir);
    test_compare_failure(dir);
    test_config_file_precedence(dir);

    fs::remove_all(dir);
    if (g_failures > 0) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all cli checks passed\n");
    return 0;
}
