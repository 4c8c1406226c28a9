#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tmkit/dsl.hpp"

#ifndef TMKIT_CORPUS_DIR
#define TMKIT_CORPUS_DIR "corpus"
#endif

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string corpus_path(const std::string& name) {
  return std::string(TMKIT_CORPUS_DIR) + "/" + name;
}

inline tmkit::Document load_corpus(const std::string& name) {
  tmkit::ParseResult result = tmkit::parse(read_file(corpus_path(name)), name);
  if (!result.ok()) {
    std::string message = "corpus file " + name + " failed to parse:";
    for (const auto& error : result.errors) message += "\n  " + error.message();
    for (const auto& diag : result.build_errors)
      message += "\n  [" + diag.code + "] " + diag.message;
    throw std::runtime_error(message);
  }
  return std::move(result.doc);
}

}  // namespace testutil
