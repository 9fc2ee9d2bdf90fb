#include <doctest.h>

#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace vpc;
using namespace vpc::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / ("vpc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

Run cli(const std::string& args) {
    fs::path out = scratch() / "out.txt";
    std::string cmd = std::string("\"") + VPC_BIN + "\" " + args + " > \"" + out.string() + "\" 2>&1";
    int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out.string());
    return r;
}

std::string write(const std::string& name, const std::string& text) {
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::size_t number_of(const std::vector<DerivOption>& opts, const std::string& conn, const std::string& text) {
    for (std::size_t i = 0; i < opts.size(); ++i)
        if (render_connection(opts[i].connection) == conn && opts[i].text() == text) return i + 1;
    return 0;
}

}  // namespace

TEST_CASE("check") {
    std::string files;
    for (const auto& id : fixture_order()) files += " \"" + fixtures_dir() + "/" + id + ".proof\"";
    Run all = cli("check" + files);
    CHECK_MESSAGE(all.status == 0, all.out);
    CHECK(all.out.find("T1.proof: ok (T1)") != std::string::npos);

    ProofScript bad = fixture("T1");
    bad.lines[4].connections[0].labels = {1, 4, 4};
    Run corrupted = cli("check " + write("T1.proof", render_proof(bad)));
    CHECK(corrupted.status == 1);
    CHECK(corrupted.out.find("FAIL") != std::string::npos);

    CHECK(cli("check /nonexistent/T1.proof").status == 2);
    CHECK(cli("check " + write("junk.proof", "Theorem X.\n[ [ Eq(\n")).status == 2);
    CHECK(cli("frobnicate").status == 2);
}

TEST_CASE("scripted derivation reproduces a split listing") {
    std::string reg = write("reg.dat", slurp(seed_path()));
    Registry r = seed();
    Derivation d = new_derivation(fixture("T18").header.premise);
    split(d, 1);
    std::size_t n1 = number_of(generate_options(d.branches[0], r), "[L2,1,2]", "Lt([0,b],[])");
    std::size_t n2 = number_of(generate_options(d.branches[1], r), "[L1,1,2]", "Lt([0,b],[])");
    REQUIRE(n1 > 0);
    REQUIRE(n2 > 0);
    std::string script = write("t18.txt", "split 1\nfocus 1\noptions\npick " + std::to_string(n1) +
                                              "\nfocus 2\noptions\npick " + std::to_string(n2) +
                                              "\ncontract\nextract T18\nlisting\nquit\n");
    Run run = cli("--axioms " + reg + " derive --premises " + quote("[Neq([a,0],[]), Mult([a,a],[b])]") + " --script " +
                  script + " --options-file " + (scratch() / "options.dat").string());
    CHECK_MESSAGE(run.status == 0, run.out);
    CHECK(run.out.find(render_proof(fixture("T18"))) != std::string::npos);
    CHECK(slurp((scratch() / "options.dat").string()).find("[L1,1,2]") != std::string::npos);
    CHECK(load_registry(reg).contains("T18"));

    Run wrong = cli("--axioms " + reg + " derive --premises " + quote("[Eq([a,b],[])]") + " --script " +
                    write("bad.txt", "pick 1\n") + " --no-save");
    CHECK(wrong.status == 1);
}

TEST_CASE("exec") {
    Run ok = cli("exec --program " + quote("[Abs([x,0,-1],[y])]") + " --bind x=-4");
    CHECK(ok.status == 0);
    CHECK(ok.out.find("y = 4") != std::string::npos);
    Run tv = cli("exec --program " + quote("[Lt([a,a],[])]") + " --bind a=3");
    CHECK(tv.status == 1);
    CHECK(tv.out.find("TypeViolation") != std::string::npos);
    Run over = cli("--set N=12 exec --program " + quote("[Mult([a,a],[b])]") + " --bind a=4");
    CHECK(over.status == 1);
}

TEST_CASE("a bogus axiom is caught by the oracle and retracted with its dependents") {
    std::string text = slurp(seed_path()) +
                       "\naxiom BOGUS\n[ Int([a],[]), Lt([a,a],[]) ]\n"
                       "\ntheorem USESBOGUS\nproof: tmp.proof\ndeps: BOGUS\n[ Int([a],[]), Lt([a,a],[]) ]\n";
    std::string reg = write("bogus.dat", text);
    Run sound = cli("--axioms " + reg + " oracle --entry A13 --domain -5..5");
    CHECK(sound.status == 0);
    Run caught = cli("--axioms " + reg + " oracle --entry BOGUS --domain -5..5");
    CHECK(caught.status == 1);
    CHECK(caught.out.find("counterexample") != std::string::npos);

    Run dry = cli("--axioms " + reg + " retract --id BOGUS --dry-run");
    CHECK(dry.status == 0);
    CHECK(load_registry(reg).contains("USESBOGUS"));
    Run gone = cli("--axioms " + reg + " retract --id BOGUS");
    CHECK(gone.status == 0);
    CHECK(gone.out.find("removed USESBOGUS") != std::string::npos);
    Registry after = load_registry(reg);
    CHECK_FALSE(after.contains("BOGUS"));
    CHECK_FALSE(after.contains("USESBOGUS"));
    CHECK(after == seed());
}

TEST_CASE("purge") {
    std::string text = slurp(seed_path()) + "\ntheorem DOOMED\nproof: tmp.proof\n[ [ Lt([x,x],[]), Add([x,y],[z]) ], Int([z],[]) ]\n"
                                            "\ntheorem KEPT\nproof: tmp.proof\n[ [ Lt([a,b],[]) ], Int([a],[]) ]\n";
    std::string reg = write("purge.dat", text);
    Run run = cli("--axioms " + reg + " purge --id A33");
    CHECK(run.status == 0);
    Registry after = load_registry(reg);
    CHECK_FALSE(after.contains("DOOMED"));
    CHECK(after.contains("KEPT"));
}
