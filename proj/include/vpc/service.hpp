#pragma once

// Interactive derivation sessions shared by the REPL and the HTTP service.

#include "vpc/engine.hpp"
#include "vpc/registry.hpp"

#include <json.hpp>

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace vpc {

/// Errors carrying an HTTP-style status: 404 unknown, 409 stale, 422 invalid.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, std::string code, const std::string& what)
        : std::runtime_error(what), status_(status), code_(std::move(code)) {}
    int status() const { return status_; }
    const std::string& code() const { return code_; }

private:
    int status_;
    std::string code_;
};

class Session {
public:
    Session(std::string id, Derivation d) : id_(std::move(id)), root_(std::move(d)) {}

    const std::string& id() const { return id_; }
    const Derivation& root() const { return root_; }
    const std::vector<std::size_t>& focus_path() const { return path_; }
    const Derivation& focused() const { return vpc::focus(root_, path_); }

    std::vector<DerivOption> options(const Registry& reg, const MachineParams& params) const;
    /// 1-based option number; a non-empty hash must match the option's hash.
    const DerivLine& apply(const Registry& reg, std::size_t number, const std::string& hash,
                           const MachineParams& params);
    /// Option by hash alone.
    const DerivLine& apply_hash(const Registry& reg, const std::string& hash, const MachineParams& params);
    void split(std::size_t label, const MachineParams& params);
    /// Contracts the focused derivation's split, or the parent's when the
    /// focus is inside a branch; focus moves to the contracted derivation.
    ContractResult contract(const MachineParams& params);
    void focus(std::vector<std::size_t> path);
    Extraction extract(Registry& reg, const std::string& id, EntryKind kind, const MachineParams& params);
    void undo();
    std::size_t undo_depth() const { return history_.size(); }

    std::chrono::system_clock::time_point created() const { return created_; }
    std::chrono::system_clock::time_point updated() const { return updated_; }

    std::mutex& mutex() const { return mutex_; }

private:
    void checkpoint();
    Derivation& focused_mut() { return vpc::focus(root_, path_); }

    std::string id_;
    Derivation root_;
    std::vector<std::size_t> path_;
    std::vector<std::pair<Derivation, std::vector<std::size_t>>> history_;
    std::chrono::system_clock::time_point created_ = std::chrono::system_clock::now();
    std::chrono::system_clock::time_point updated_ = created_;
    mutable std::mutex mutex_;
};

/// Registry plus the live sessions. Registry writes take the exclusive latch.
class Service {
public:
    explicit Service(Registry reg, std::string registry_path = {}, MachineParams params = {});

    std::shared_ptr<Session> create(const Program& premises);
    std::shared_ptr<Session> get(const std::string& id) const;

    const MachineParams& params() const { return params_; }
    const std::string& registry_path() const { return registry_path_; }

    template <class F>
    auto read_registry(F&& f) const {
        std::shared_lock lock(reg_mutex_);
        return f(static_cast<const Registry&>(reg_));
    }
    template <class F>
    auto write_registry(F&& f) {
        std::unique_lock lock(reg_mutex_);
        return f(reg_);
    }
    /// Writes the registry back to its file when one was given.
    void persist();

private:
    Registry reg_;
    std::string registry_path_;
    MachineParams params_;
    mutable std::shared_mutex reg_mutex_;
    mutable std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::size_t counter_ = 0;
};

// --- consistency -----------------------------------------------------------------

/// Oracle run for an integer-level entry: the premise against the conclusion,
/// or a falsity program against the empty conclusion. nullopt for schemas and
/// higher-order entries.
std::optional<OracleReport> oracle_entry(const Entry& e, Domain domain, const MachineParams& params = {});

/// Zero counterexamples, and zero computable points for a falsity entry.
bool oracle_passes(const Entry& e, const OracleReport& r);

// --- JSON views ------------------------------------------------------------------

nlohmann::json to_json(const ConnectionList& c);
nlohmann::json to_json(const Derivation& d);
nlohmann::json to_json(const Session& s);
nlohmann::json to_json(const std::vector<DerivOption>& options);
nlohmann::json to_json(const Entry& e);
nlohmann::json to_json(const ExecOutcome& o);

/// Reads `lines` back into a listing body (the header is supplied).
ProofScript script_from_json(const nlohmann::json& derivation, const ProofHeader& header);

ProofHeader header_for(const Entry& e);

}  // namespace vpc
