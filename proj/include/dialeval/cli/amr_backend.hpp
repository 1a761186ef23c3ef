#pragma once

// Pluggable sentence -> PENMAN backends. The fixture backend serves
// pre-parsed graphs from a JSONL file ({"text": ..., "penman": ...}) so the
// whole pipeline runs with no parser installed; the command backend pipes the
// sentence to an external program and reads PENMAN from its stdout. A
// text-hash cache directory sits in front of either.

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "json.hpp"

#include "dialeval/common.hpp"

namespace dialeval::cli {

class AmrBackend {
   public:
    virtual ~AmrBackend() = default;
    virtual std::string parse_sentence(const std::string& text) = 0;
    virtual std::string name() const = 0;
};

class FixtureBackend : public AmrBackend {
   public:
    static FixtureBackend load(const std::string& path) {
        FixtureBackend backend;
        backend.path_ = path;
        size_t line_no = 0;
        for (const auto& line : split_lines(read_file(path))) {
            ++line_no;
            if (trim(line).empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw FormatError("fixture graph line " + std::to_string(line_no) + ": " +
                                  e.what());
            }
            if (!j.contains("text") || !j.contains("penman"))
                throw FormatError("fixture graph line " + std::to_string(line_no) +
                                  " needs 'text' and 'penman'");
            backend.by_text_[j["text"].get<std::string>()] = j["penman"].get<std::string>();
        }
        return backend;
    }

    std::string parse_sentence(const std::string& text) override {
        auto it = by_text_.find(text);
        if (it == by_text_.end())
            throw FormatError("no fixture graph for text: \"" + text + "\"");
        return it->second;
    }

    std::string name() const override { return "fixture:" + path_; }

    void add(const std::string& text, const std::string& penman) { by_text_[text] = penman; }

   private:
    std::string path_;
    std::map<std::string, std::string> by_text_;
};

class CommandBackend : public AmrBackend {
   public:
    explicit CommandBackend(std::string command) : command_(std::move(command)) {}

    std::string parse_sentence(const std::string& text) override {
        std::string quoted = "'";
        for (char c : text) {
            if (c == '\'')
                quoted += "'\\''";
            else
                quoted += c;
        }
        quoted += "'";
        std::string full = "printf '%s' " + quoted + " | " + command_;
        FILE* pipe = popen(full.c_str(), "r");
        if (!pipe) throw IoError("cannot launch AMR parser command: " + command_);
        std::string out;
        char buf[4096];
        size_t n;
        while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
        int status = pclose(pipe);
        if (status != 0)
            throw IoError("AMR parser command failed (status " + std::to_string(status) +
                          ") for text: " + text);
        if (trim(out).empty()) throw IoError("AMR parser produced no output for text: " + text);
        return out;
    }

    std::string name() const override { return "command:" + command_; }

   private:
    std::string command_;
};

// File cache keyed by the text hash; repeated runs never re-invoke the
// backend for a text already parsed.
class CachingBackend : public AmrBackend {
   public:
    CachingBackend(std::shared_ptr<AmrBackend> inner, std::string cache_dir)
        : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)) {
        std::filesystem::create_directories(cache_dir_);
    }

    std::string parse_sentence(const std::string& text) override {
        std::string path = cache_dir_ + "/" + hex64(fnv1a64(text)) + ".penman";
        if (std::filesystem::exists(path)) return read_file(path);
        std::string penman = inner_->parse_sentence(text);
        write_file(path, penman);
        return penman;
    }

    std::string name() const override { return inner_->name() + "+cache"; }

   private:
    std::shared_ptr<AmrBackend> inner_;
    std::string cache_dir_;
};

}  // namespace dialeval::cli
