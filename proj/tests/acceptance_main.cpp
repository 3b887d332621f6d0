// Acceptance battery: one PASS/FAIL/SKIP line per criterion. Exits 0 iff no
// criterion fails, apart from those listed with --known-fail (still printed
// as FAIL).
#include <algorithm>
#include <cstdio>

#include "CLI11.hpp"

#include "gpscat/acceptance.hpp"
#include "gpscat/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance battery"};
    std::string level = "full";
    bool mutate = false, expect_fail = false;
    std::vector<int> only, known;
    app.add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    app.add_flag("--mutate-b4", mutate, "flip the sign of B4");
    app.add_flag("--expect-fail", expect_fail, "succeed only if some criterion fails");
    app.add_option("--only", only, "criterion ids to run");
    app.add_option("--known-fail", known, "criterion ids whose failure is documented and tolerated");
    CLI11_PARSE(app, argc, argv);

    gps::AcceptanceOptions opt;
    opt.level = gps::acceptance_level_from_string(level);
    opt.mutate_B4 = mutate;
    opt.only = only;
    std::printf("acceptance level %s, %d worker thread(s)%s\n", level.c_str(), gps::worker_count(),
                mutate ? ", B4 sign flipped" : "");
    auto rs = gps::acceptance_suite(opt, [](const gps::CriterionResult& r) {
        std::printf("%s\n", gps::format_result(r).c_str());
        std::fflush(stdout);
    });
    int failed = 0, tolerated = 0;
    for (const auto& r : rs) {
        if (r.skipped || r.pass) continue;
        if (std::find(known.begin(), known.end(), r.id) != known.end())
            ++tolerated;
        else
            ++failed;
    }
    std::printf("%d of %zu criteria failed", failed + tolerated, rs.size());
    if (tolerated) std::printf(" (%d known failure%s)", tolerated, tolerated > 1 ? "s" : "");
    std::printf("\n");
    const bool ok = failed == 0;
    return ok != expect_fail ? 0 : 1;
}
