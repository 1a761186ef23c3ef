#pragma once

// Run directory bookkeeping: a manifest listing the resolved config, input
// fingerprints, and produced artifacts with checksums. The run id derives
// from the command, config snapshot and inputs, so rerunning an identical
// command lands in the same directory. An advisory lock file keeps two
// commands out of one run directory.

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dialeval/cli/config.hpp"
#include "dialeval/common.hpp"

namespace dialeval::cli {

struct RunManifest {
    std::string run_id;
    std::string command;
    std::string config_hash;
    std::string config_snapshot;
    std::vector<std::pair<std::string, std::string>> inputs;     // path, checksum
    std::vector<std::pair<std::string, std::string>> artifacts;  // path, checksum
    std::string created_at;

    nlohmann::json to_json() const {
        nlohmann::json inputs_json = nlohmann::json::array();
        for (const auto& [path, sum] : inputs)
            inputs_json.push_back({{"path", path}, {"checksum", sum}});
        nlohmann::json artifacts_json = nlohmann::json::array();
        for (const auto& [path, sum] : artifacts)
            artifacts_json.push_back({{"path", path}, {"checksum", sum}});
        return {{"run_id", run_id},
                {"command", command},
                {"config_hash", config_hash},
                {"config", config_snapshot},
                {"inputs", inputs_json},
                {"artifacts", artifacts_json},
                {"created_at", created_at}};
    }
};

inline std::string file_checksum(const std::string& path) {
    return hex64(fnv1a64(read_file(path)));
}

class RunDirectory {
   public:
    // Joins out_dir/<command>-<hash8>; the hash covers the config snapshot
    // and the declared input files.
    RunDirectory(const std::string& out_dir, const std::string& command, const Config& config,
                 const std::vector<std::string>& input_paths) {
        manifest_.command = command;
        manifest_.config_snapshot = config.snapshot();
        manifest_.config_hash = hex64(fnv1a64(manifest_.config_snapshot));
        std::string fingerprint = manifest_.config_snapshot;
        for (const auto& path : input_paths) {
            std::string sum = file_checksum(path);
            manifest_.inputs.emplace_back(path, sum);
            fingerprint += path + ":" + sum + "\n";
        }
        manifest_.run_id = command + "-" + hex64(fnv1a64(fingerprint)).substr(0, 8);
        dir_ = out_dir + "/" + manifest_.run_id;
        std::filesystem::create_directories(dir_);

        lock_path_ = dir_ + "/.lock";
        if (std::filesystem::exists(lock_path_))
            throw IoError("run directory is locked (stale lock? remove " + lock_path_ + ")");
        write_file(lock_path_, "locked\n");
        locked_ = true;
    }

    ~RunDirectory() { release(); }

    RunDirectory(const RunDirectory&) = delete;
    RunDirectory& operator=(const RunDirectory&) = delete;

    const std::string& path() const { return dir_; }
    const std::string& run_id() const { return manifest_.run_id; }
    const std::string& config_hash() const { return manifest_.config_hash; }

    std::string artifact_path(const std::string& name) const { return dir_ + "/" + name; }

    void log(const std::string& line) { log_ += line + "\n"; }

    void write_artifact(const std::string& name, const std::string& content) {
        std::string path = artifact_path(name);
        write_file(path, content);
        record_artifact(name);
    }

    // For artifacts written by other components (checkpoints, attention maps).
    void record_artifact(const std::string& name) {
        manifest_.artifacts.emplace_back(name, file_checksum(artifact_path(name)));
    }

    void finalize() {
        auto now = std::chrono::system_clock::now();
        std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        manifest_.created_at = buf;
        write_file(dir_ + "/config.snapshot", manifest_.config_snapshot);
        if (!log_.empty()) write_file(dir_ + "/log.txt", log_);
        write_file(dir_ + "/manifest.json", manifest_.to_json().dump(2) + "\n");
        release();
    }

   private:
    void release() {
        if (locked_) {
            std::filesystem::remove(lock_path_);
            locked_ = false;
        }
    }

    RunManifest manifest_;
    std::string dir_;
    std::string lock_path_;
    std::string log_;
    bool locked_ = false;
};

// Checks that every artifact listed in a manifest exists with its recorded
// checksum; returns the failures.
inline std::vector<std::string> verify_manifest(const std::string& run_dir) {
    nlohmann::json manifest = nlohmann::json::parse(read_file(run_dir + "/manifest.json"));
    std::vector<std::string> problems;
    for (const auto& entry : manifest["artifacts"]) {
        std::string path = run_dir + "/" + entry["path"].get<std::string>();
        if (!std::filesystem::exists(path)) {
            problems.push_back("missing artifact: " + path);
            continue;
        }
        if (file_checksum(path) != entry["checksum"].get<std::string>())
            problems.push_back("checksum mismatch: " + path);
    }
    return problems;
}

}  // namespace dialeval::cli
