// vpc: check, derive, exec, oracle, retract, purge, serve.

#include "vpc/engine.hpp"
#include "vpc/exec.hpp"
#include "vpc/http.hpp"
#include "vpc/registry.hpp"
#include "vpc/service.hpp"
#include "vpc/syntax.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace vpc;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string default_axioms() {
    if (const char* env = std::getenv("VPC_AXIOMS")) return env;
    return VPC_DEFAULT_AXIOMS;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Literal text, or the contents of a file when prefixed with '@'.
std::string text_arg(const std::string& arg) { return !arg.empty() && arg[0] == '@' ? slurp(arg.substr(1)) : arg; }

MachineParams load_params(const std::string& config, const std::vector<std::string>& sets) {
    std::string text = config.empty() ? std::string() : slurp(config);
    for (const auto& s : sets) text += "\n" + s;
    return parse_config(text);
}

Domain parse_domain(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw std::invalid_argument("domain must look like lo..hi");
    Domain d{std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
    if (d.lo > d.hi) throw std::invalid_argument("empty domain " + text);
    return d;
}

std::string describe(const ParseError& e, const std::string& file) {
    return file + ":" + std::to_string(e.span().line) + ":" + std::to_string(e.span().column) + ": " + e.message();
}

// --- check ----------------------------------------------------------------------

int run_check(const std::vector<std::string>& files, const std::string& axioms, bool strict, bool save,
              const std::string& domain, const MachineParams& params) {
    Registry reg = load_registry(axioms, params);
    CheckOptions opts;
    opts.strict = strict;
    opts.domain = parse_domain(domain);
    int status = 0;
    bool changed = false;
    for (const auto& file : files) {
        std::string text;
        try {
            text = slurp(file);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kUsage;
        }
        ProofScript script;
        try {
            script = parse_proof(text);
        } catch (const ParseError& e) {
            std::cerr << describe(e, file) << "\n";
            return kUsage;
        }
        CheckReport r = check_proof(script, reg, opts, params, file);
        if (!r.ok()) {
            std::cerr << r.describe();
            std::cout << file << ": FAIL\n";
            status = kFail;
            continue;
        }
        std::cout << file << ": ok (" << script.header.id << ")\n";
        if (reg.contains(script.header.id)) continue;
        reg.add(*r.entry, params);
        changed = true;
    }
    if (save && changed && status == 0) save_registry(reg, axioms);
    return status;
}

// --- derive ---------------------------------------------------------------------

struct Repl {
    Registry& reg;
    std::string axioms;
    std::string options_file;
    MachineParams params;
    Session session;
    std::vector<DerivOption> shown;
    std::string shown_state;

    void print_derivation(std::ostream& out) const {
        const Derivation& d = session.focused();
        if (!session.focus_path().empty()) {
            out << "branch";
            for (auto i : session.focus_path()) out << " " << i + 1;
            out << "\n";
        }
        for (const auto& l : d.lines) out << render_proof_line(l.label, l.statement, l.split_mark, l.connections) << "\n";
        if (d.has_split()) out << "split on line " << d.split_label << ": " << d.branches.size() << " branches\n";
        if (!d.open()) out << "status: " << to_string(d.status) << "\n";
    }

    void refresh(std::ostream& out) {
        shown = session.options(reg, params);
        shown_state = fingerprint(session.focused());
        std::string text = render_options(shown);
        if (!options_file.empty()) std::ofstream(options_file) << text;
        out << text;
    }

    bool stale() const { return shown_state != fingerprint(session.focused()); }

    // Returns false on quit.
    bool command(const std::string& line, std::ostream& out) {
        std::istringstream in(line);
        std::string verb;
        in >> verb;
        if (verb.empty() || verb[0] == '#') return true;
        if (verb == "quit" || verb == "exit") return false;
        if (verb == "options") {
            refresh(out);
        } else if (verb == "show") {
            print_derivation(out);
        } else if (verb == "pick") {
            std::size_t n = 0;
            if (!(in >> n)) throw std::invalid_argument("usage: pick <n>");
            if (stale()) throw ServiceError(409, "stale_option", "options are stale; run 'options' again");
            if (n == 0 || n > shown.size()) throw std::invalid_argument("no option " + std::to_string(n));
            const DerivLine& l = session.apply(reg, n, shown[n - 1].hash(), params);
            out << render_proof_line(l.label, l.statement, l.split_mark, l.connections) << "\n";
        } else if (verb == "false") {
            if (stale()) refresh(out);
            for (std::size_t i = 0; i < shown.size(); ++i)
                if (shown[i].falsity()) {
                    const DerivLine& l = session.apply(reg, i + 1, shown[i].hash(), params);
                    out << render_proof_line(l.label, l.statement, l.split_mark, l.connections) << "\n";
                    return true;
                }
            throw std::invalid_argument("no falsity option");
        } else if (verb == "split") {
            std::size_t label = 0;
            if (!(in >> label)) throw std::invalid_argument("usage: split <label>");
            session.split(label, params);
            out << "split line " << label << " into " << session.focused().branches.size() << " branches\n";
        } else if (verb == "focus") {
            std::vector<std::size_t> path;
            for (std::size_t i; in >> i;) {
                if (i == 0) throw std::invalid_argument("branches are numbered from 1");
                path.push_back(i - 1);
            }
            session.focus(path);
            print_derivation(out);
        } else if (verb == "contract") {
            ContractResult r = session.contract(params);
            const DerivLine& l = session.focused().lines.back();
            out << render_proof_line(l.label, l.statement, l.split_mark, l.connections) << "\n";
            if (r.which == ContractResult::Case::AllFalse) out << "every branch is false\n";
        } else if (verb == "extract") {
            std::string id, flag;
            if (!(in >> id)) throw std::invalid_argument("usage: extract <id> [--lemma]");
            in >> flag;
            Extraction x = session.extract(reg, id, flag == "--lemma" ? EntryKind::Lemma : EntryKind::Theorem, params);
            for (const auto& w : x.warnings) out << "warning: " << w << "\n";
            out << render_header_body(header_for(x.entry)) << "\n";
            if (!axioms.empty()) save_registry(reg, axioms);
        } else if (verb == "save") {
            std::string path;
            if (!(in >> path)) throw std::invalid_argument("usage: save <path>");
            ProofHeader h;
            if (const Entry* e = last_extracted()) h = header_for(*e);
            std::ofstream(path) << render_proof(to_script(session.root(), h));
            out << "saved " << path << "\n";
        } else if (verb == "listing") {
            ProofHeader h;
            if (const Entry* e = last_extracted()) h = header_for(*e);
            out << render_proof(to_script(session.root(), h));
        } else if (verb == "undo") {
            session.undo();
            print_derivation(out);
        } else {
            throw std::invalid_argument("unknown command '" + verb + "'");
        }
        return true;
    }

    const Entry* last_extracted() const {
        if (session.root().status != DerivStatus::Extracted) return nullptr;
        const auto& es = reg.entries();
        return es.empty() ? nullptr : &es.back();
    }
};

int run_derive(const std::string& axioms, const std::string& premises, const std::string& script,
               const std::string& options_file, bool no_save, const MachineParams& params) {
    Registry reg = load_registry(axioms, params);
    Program p = validate_program(parse_program(text_arg(premises)), params);
    Repl repl{reg, no_save ? std::string() : axioms, options_file, params, Session("cli", new_derivation(p, params)), {}, {}};
    std::ifstream file;
    if (!script.empty()) {
        file.open(script);
        if (!file) throw std::runtime_error("cannot open " + script);
    }
    std::istream& in = script.empty() ? std::cin : file;
    const bool interactive = script.empty();
    repl.print_derivation(std::cout);
    int status = 0;
    for (std::string line; (interactive && std::cout << "> " << std::flush), std::getline(in, line);) {
        try {
            if (!repl.command(line, std::cout)) break;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            if (!interactive) status = kFail;
        }
    }
    return status;
}

// --- exec / oracle ---------------------------------------------------------------

int run_exec(const std::string& program, const std::vector<std::string>& binds, const MachineParams& params) {
    Program p = validate_program(parse_program(text_arg(program)), params);
    Env env;
    for (const auto& b : binds) {
        auto eq = b.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("binding must be name=value: " + b);
        std::string name = b.substr(0, eq), value = b.substr(eq + 1);
        if (!value.empty() && value[0] == '[')
            env.emplace(name, Value::program(parse_program(value)));
        else
            env.emplace(name, Value::integer(std::stoll(value), params));
    }
    ExecOutcome o = exec_program(p, env, params);
    std::cout << to_string(o.kind);
    if (!o.ok()) std::cout << " at statement " << o.at << ": " << o.detail;
    std::cout << "\n";
    for (const auto& [k, v] : o.outputs) std::cout << "  " << k << " = " << v.to_string() << "\n";
    return o.ok() ? 0 : kFail;
}

int run_oracle(const std::string& axioms, const std::vector<std::string>& ids, bool all, const std::string& domain,
               const MachineParams& params) {
    Registry reg = load_registry(axioms, params);
    Domain d = parse_domain(domain);
    std::vector<const Entry*> targets;
    if (all) {
        for (const auto& e : reg.entries()) targets.push_back(&e);
    } else {
        if (ids.empty()) throw std::invalid_argument("give --entry or --all");
        for (const auto& id : ids) targets.push_back(&reg.at(id));
    }
    int status = 0;
    for (const Entry* e : targets) {
        std::optional<OracleReport> r;
        try {
            r = oracle_entry(*e, d, params);
        } catch (const DomainTooLarge& ex) {
            std::cout << entry_id(*e) << ": skipped (" << ex.what() << ")\n";
            continue;
        }
        if (!r) {
            if (!all) std::cout << entry_id(*e) << ": skipped (not an integer-level entry)\n";
            continue;
        }
        bool pass = oracle_passes(*e, *r);
        std::cout << entry_id(*e) << ": " << (pass ? "ok" : "FAIL") << " points=" << r->points
                  << " premise-computable=" << r->premise_computable << " counterexamples=" << r->counterexample_count;
        if (r->timeouts) std::cout << " timeouts=" << r->timeouts;
        std::cout << "\n";
        for (const auto& env : r->counterexamples) {
            std::cout << "  counterexample:";
            for (const auto& [k, v] : env) std::cout << " " << k << "=" << v.to_string();
            std::cout << "\n";
        }
        if (!pass) status = kFail;
    }
    return status;
}

int run_cascade(const std::string& axioms, const std::string& id, bool purge, bool dry_run, const MachineParams& params) {
    Registry reg = load_registry(axioms, params);
    if (!reg.contains(id)) throw RegistryError("unknown entry '" + id + "'");
    std::vector<std::string> removed = purge ? reg.purge_by_falsity(id) : reg.retract(id);
    for (const auto& r : removed) std::cout << "removed " << r << "\n";
    if (removed.empty()) std::cout << "nothing removed\n";
    if (!dry_run) save_registry(reg, axioms);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Programs as formal statements: proof checking and derivation"};
    app.require_subcommand(1);
    std::string axioms = default_axioms();
    std::string config;
    std::vector<std::string> sets;
    app.add_option("--axioms", axioms, "registry file (default $VPC_AXIOMS)");
    app.add_option("--params", config, "machine parameter file (K=, L=, M=, N=, T= lines)");
    app.add_option("--set", sets, "override one parameter, e.g. --set N=12");

    auto* check = app.add_subcommand("check", "replay proof listings against the registry");
    std::vector<std::string> files;
    bool strict = false, save = false;
    std::string check_domain = "-10..10";
    check->add_option("files", files, "listing files, checked in order")->required();
    check->add_flag("--strict", strict, "also run the execution oracle on every integer-level step");
    check->add_option("--domain", check_domain, "oracle domain for --strict");
    check->add_flag("--save", save, "store the checked theorems in the registry file");

    auto* derive = app.add_subcommand("derive", "interactive derivation");
    std::string premises = "[]", script, options_file = "options.dat";
    bool no_save = false;
    derive->add_option("--premises", premises, "premise program, or @file");
    derive->add_option("--script", script, "read commands from a file instead of standard input");
    derive->add_option("--options-file", options_file, "where the numbered options are written");
    derive->add_flag("--no-save", no_save, "do not write extracted theorems to the registry file");

    auto* exec = app.add_subcommand("exec", "run a program on bound inputs");
    std::string program;
    std::vector<std::string> binds;
    exec->add_option("--program", program, "program text, or @file")->required();
    exec->add_option("--bind", binds, "name=value");

    auto* oracle = app.add_subcommand("oracle", "brute-force soundness check of registry entries");
    std::vector<std::string> ids;
    bool all = false;
    std::string domain = "-10..10";
    oracle->add_option("--entry", ids, "entry id");
    oracle->add_flag("--all", all, "every integer-level entry");
    oracle->add_option("--domain", domain, "lo..hi");

    auto* retract = app.add_subcommand("retract", "remove an entry and everything depending on it");
    auto* purge = app.add_subcommand("purge", "remove entries whose premise contains a false program");
    std::string target;
    bool dry_run = false;
    for (auto* sc : {retract, purge}) {
        sc->add_option("--id", target, "entry id")->required();
        sc->add_flag("--dry-run", dry_run, "report without saving");
    }

    auto* serve_cmd = app.add_subcommand("serve", "HTTP session service");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve_cmd->add_option("--host", host);
    serve_cmd->add_option("--port", port);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsage;
    }

    try {
        MachineParams params = load_params(config, sets);
        if (*check) return run_check(files, axioms, strict, save, check_domain, params);
        if (*derive) return run_derive(axioms, premises, script, options_file, no_save, params);
        if (*exec) return run_exec(program, binds, params);
        if (*oracle) return run_oracle(axioms, ids, all, domain, params);
        if (*retract) return run_cascade(axioms, target, false, dry_run, params);
        if (*purge) return run_cascade(axioms, target, true, dry_run, params);
        if (*serve_cmd) {
            Service svc(load_registry(axioms, params), axioms, params);
            std::cerr << "listening on " << host << ":" << port << "\n";
            serve(svc, host, port);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.span().line << ":" << e.span().column << ": " << e.message() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return 0;
}
