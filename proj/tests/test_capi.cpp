// Exercises the shared-library surface end to end through the C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "amw/amw.h"

namespace fs = std::filesystem;

namespace {

std::string data_path(const char* name) { return std::string(AMW_DATA_DIR) + "/" + name; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("amw_capi_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

} // namespace

TEST_CASE("graph load, stats and error codes") {
    amw_graph* g = nullptr;
    REQUIRE(amw_graph_load_text("0 1\n1 2\n0 2\n", &g) == AMW_OK);
    int32_t n = 0;
    size_t m = 0;
    CHECK(amw_graph_node_count(g, &n) == AMW_OK);
    CHECK(amw_graph_edge_count(g, &m) == AMW_OK);
    CHECK(n == 3);
    CHECK(m == 3);
    double avg = 0.0;
    CHECK(amw_graph_average_degree(g, &avg) == AMW_OK);
    CHECK(avg == doctest::Approx(2.0));
    amw_graph_free(g);

    amw_graph* bad = nullptr;
    CHECK(amw_graph_load_text("0 zebra\n", &bad) == AMW_ERR_PARSE);
    CHECK(std::string(amw_last_error()).find("line 1") != std::string::npos);
    CHECK(amw_graph_load_file("/no/such/file.txt", &bad) == AMW_ERR_IO);
    CHECK(amw_graph_load_text(nullptr, &bad) == AMW_ERR_INVALID);
}

TEST_CASE("detect and evaluate through handles") {
    amw_graph* g = nullptr;
    REQUIRE(amw_graph_load_file(data_path("football.txt").c_str(), &g) == AMW_OK);

    amw_partition* part = nullptr;
    int32_t trace = 0;
    REQUIRE(amw_detect(g, AMW_DETECTOR_FAST_GREEDY, 0, 0, &part, &trace) == AMW_OK);
    int32_t k = 0;
    CHECK(amw_partition_community_count(part, &k) == AMW_OK);
    CHECK(k == 6);
    CHECK(trace > 0);

    amw_partition* gt = nullptr;
    REQUIRE(amw_partition_load_file(data_path("football_gt.txt").c_str(), g, &gt) == AMW_OK);
    amw_metric_report r;
    REQUIRE(amw_evaluate(g, part, gt, &r) == AMW_OK);
    CHECK(r.q == doctest::Approx(0.568241392983).epsilon(1e-9));
    CHECK(r.ari == doctest::Approx(0.493332604499).epsilon(1e-6));
    CHECK(r.nmi == doctest::Approx(0.784422429925).epsilon(1e-6));

    double q = 0.0;
    CHECK(amw_modularity(g, part, 0, &q) == AMW_OK);
    CHECK(q == doctest::Approx(r.q));

    amw_partition_free(gt);
    amw_partition_free(part);
    amw_graph_free(g);
}

TEST_CASE("sbm, training, weighting and model files") {
    amw_sbm_config cfg;
    amw_sbm_config_init(&cfg);
    cfg.n_blocks = 6;
    cfg.block_size_min = 5;
    cfg.block_size_max = 8;
    cfg.inter_edges_per_pair_rate = 1.5;
    cfg.rng_seed = 42;

    amw_labeled_graph* lg = nullptr;
    REQUIRE(amw_sbm_generate(&cfg, &lg) == AMW_OK);
    const amw_graph* g = nullptr;
    const amw_partition* gt = nullptr;
    REQUIRE(amw_labeled_graph_parts(lg, &g, &gt) == AMW_OK);
    int32_t blocks = 0;
    CHECK(amw_partition_community_count(gt, &blocks) == AMW_OK);
    CHECK(blocks == 6);

    amw_train_params params;
    amw_train_params_init(&params);
    params.pair_seed = 7;
    amw_model* model = nullptr;
    REQUIRE(amw_train(lg, &params, &model) == AMW_OK);

    double p[7];
    REQUIRE(amw_model_coefficients(model, p) == AMW_OK);

    amw_graph* weighted = nullptr;
    REQUIRE(amw_apply_weights(g, model, &weighted) == AMW_OK);
    amw_graph* stripped = nullptr;
    REQUIRE(amw_graph_strip_nonpositive(weighted, &stripped) == AMW_OK);
    size_t kept = 0;
    CHECK(amw_graph_edge_count(stripped, &kept) == AMW_OK);
    CHECK(kept > 0);

    TempDir tmp;
    const std::string model_path = (tmp.path / "model.json").string();
    REQUIRE(amw_model_save_file(model, model_path.c_str()) == AMW_OK);
    amw_model* loaded = nullptr;
    REQUIRE(amw_model_load_file(model_path.c_str(), &loaded) == AMW_OK);
    double p2[7];
    REQUIRE(amw_model_coefficients(loaded, p2) == AMW_OK);
    for (int i = 0; i < 7; ++i) CHECK(p[i] == p2[i]);

    amw_model_free(loaded);
    amw_model_free(model);
    amw_graph_free(stripped);
    amw_graph_free(weighted);
    amw_labeled_graph_free(lg);
}

TEST_CASE("pipeline through the C API") {
    TempDir tmp;
    amw_pipeline_config cfg;
    amw_pipeline_config_init(&cfg);
    const std::string input = data_path("football.txt");
    const std::string outdir = (tmp.path / "run").string();
    cfg.input_path = input.c_str();
    cfg.output_dir = outdir.c_str();
    cfg.seed = 5;
    // keep the smoke test quick
    const double schedule[] = {10.0, 40.0};
    cfg.lambda2_schedule = schedule;
    cfg.lambda2_schedule_len = 2;
    cfg.pair_draws = 1;

    amw_pipeline_report report;
    REQUIRE(amw_pipeline_run(&cfg, &report) == AMW_OK);
    CHECK(report.communities > 1);
    for (const char* name :
         {"weighted_edges.txt", "model.json", "partition.txt", "metrics.json", "manifest.json"})
        CHECK(fs::exists(tmp.path / "run" / name));

    amw_pipeline_config missing = cfg;
    missing.input_path = "/no/such/input.txt";
    const std::string outdir2 = (tmp.path / "run2").string();
    missing.output_dir = outdir2.c_str();
    CHECK(amw_pipeline_run(&missing, &report) == AMW_ERR_IO);
    CHECK(!fs::exists(tmp.path / "run2" / "manifest.json"));
}
