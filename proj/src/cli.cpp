#include "textable/cli.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <istream>
#include <ostream>

#include <CLI11.hpp>

#include "textable/error.hpp"
#include "textable/evaluation.hpp"
#include "textable/extraction.hpp"
#include "textable/http_server.hpp"
#include "textable/jsonl.hpp"
#include "textable/service.hpp"
#include "textable/synth.hpp"
#include "textable/text.hpp"
#include "textable/workspace.hpp"

namespace textable {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct MatchOptions {
  std::string docs;
  std::string nuggets;
  std::string vectors;
  std::string labelmap;
  std::string attributes;
  std::string feedback = "oracle";
  std::string gt;
  std::string out;
  std::string format = "csv";
  std::string session_out;
  SessionConfig config;
  SignalWeights weights;
};

void add_match_flags(CLI::App& cmd, MatchOptions& o) {
  cmd.add_option("--docs", o.docs, "documents (.jsonl)")->required();
  cmd.add_option("--nuggets", o.nuggets, "nugget interchange file; built-in extraction when omitted");
  cmd.add_option("--vectors", o.vectors, "word vector store")->required();
  cmd.add_option("--labelmap", o.labelmap, "label-to-phrase map");
  cmd.add_option("--attributes", o.attributes, "comma-separated attribute names")->required();
  cmd.add_option("--budget", o.config.budget, "feedback interactions per attribute")->capture_default_str();
  cmd.add_option("--threshold", o.config.confirm_threshold, "confirmed matches that end feedback")
      ->capture_default_str();
  cmd.add_option("--k", o.config.k, "candidates per expansion")->capture_default_str();
  cmd.add_option("--q0", o.config.q0, "first root-sampling quantile")->capture_default_str();
  cmd.add_option("--tau", o.config.tau, "static-match distance cutoff");
  cmd.add_option("--seed", o.config.seed, "random seed")->capture_default_str();
  cmd.add_option("--w-label", o.weights.label, "label weight")->capture_default_str();
  cmd.add_option("--w-mention", o.weights.mention, "mention weight")->capture_default_str();
  cmd.add_option("--w-context", o.weights.context, "context weight")->capture_default_str();
  cmd.add_option("--w-position", o.weights.position, "position weight")->capture_default_str();
  cmd.add_option("--feedback", o.feedback, "feedback source")
      ->check(CLI::IsMember({"oracle", "tty"}))
      ->capture_default_str();
  cmd.add_option("--gt", o.gt, "ground truth (.jsonl), required for oracle feedback");
  cmd.add_option("--out", o.out, "table output file (stdout when omitted)");
  cmd.add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd.add_option("--session-out", o.session_out, "write the final session file here");
}

std::string render_table(const ExtractedTable& table, const std::string& format) {
  return format == "json" ? table_to_json(table).dump(2) + "\n" : table_to_csv(table);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    jsonl::write_file(path, content);
  }
}

FeedbackDecision ask(const MatchingSession& s, const Offer& offer, const EmbeddedPool& pool, std::istream& in,
                     std::ostream& out) {
  const auto& n = pool.nugget(offer.nugget);
  for (;;) {
    out << "\n[" << s.attribute() << "] " << s.confirmed_count() << "/" << s.config().confirm_threshold
        << " confirmed, " << s.interactions_used() << "/" << s.config().budget << " used\n"
        << "  " << n.document_id << ": " << n.context_sentence << "\n"
        << "  value: " << n.mention << "  (" << n.label << ")\n"
        << "belongs to " << s.attribute() << "? [y/n] " << std::flush;
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::precondition, "feedback input closed");
    const auto answer = text::to_lower(text::trim(line));
    if (answer == "y" || answer == "yes") return FeedbackDecision::confirm;
    if (answer == "n" || answer == "no") return FeedbackDecision::reject;
  }
}

int cmd_match(const MatchOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  QuerySpec spec;
  spec.documents = o.docs;
  if (!o.nuggets.empty()) spec.nuggets = o.nuggets;
  spec.vectors = o.vectors;
  if (!o.labelmap.empty()) spec.label_map = o.labelmap;
  spec.attributes = text::split_list(o.attributes);
  spec.config = o.config;
  spec.weights = o.weights;
  if (o.feedback == "oracle" && o.gt.empty()) invalid("--feedback oracle requires --gt");

  auto ws = Workspace::open(spec);
  const auto& pool = ws->pool();
  auto& sessions = ws->sessions();
  if (o.feedback == "oracle") {
    const auto truth = load_ground_truth(o.gt, ws->collection());
    std::vector<std::string> failures(sessions.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      try {
        run_matching(sessions[i], [&](const MatchingSession& s, const Offer& offer) {
          return oracle_feedback(truth, s.attribute(), pool.nugget(offer.nugget));
        });
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
    for (const auto& f : failures) {
      if (!f.empty()) invalid(f);
    }
  } else {
    for (auto& s : sessions) {
      run_matching(s, [&](const MatchingSession& session, const Offer& offer) {
        return ask(session, offer, pool, in, err);
      });
    }
  }
  for (const auto& s : sessions) {
    err << s.attribute() << ": " << s.confirmed_count() << " confirmed in " << s.interactions_used()
        << " interactions (" << to_string(s.done_reason()) << ")\n";
  }
  if (!o.session_out.empty()) jsonl::write_file(o.session_out, ws->session_file().dump(2) + "\n");
  emit(o.out, render_table(ws->table(), o.format), out);
  return 0;
}

ExtractedTable read_table(const std::string& path) {
  const auto content = jsonl::read_file(path);
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') return table_from_json(json::parse(content));
  return table_from_csv(content);
}

int cmd_eval(const std::string& table_path, const std::string& gt, const std::string& docs, const std::string& report_out,
             std::ostream& out) {
  const auto collection = load_documents(docs);
  const auto truth = load_ground_truth(gt, collection);
  const auto table = read_table(table_path);
  for (const auto& id : table.document_ids) {
    if (!collection.find(id)) invalid("table row \"" + id + "\" is not a document in " + docs);
  }
  const auto report = score_table(table, truth);
  out << format_report(report);
  if (!report_out.empty()) jsonl::write_file(report_out, report_to_json(report).dump(2) + "\n");
  return 0;
}

std::atomic<HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& state_dir, std::ostream& out) {
  SessionService service(state_dir.empty() ? std::nullopt : std::optional<fs::path>(state_dir));
  const auto restored = service.load_persisted();
  HttpServer server(service);
  const int bound = server.bind(host, port);
  out << "listening on http://" << host << ":" << bound;
  if (restored > 0) out << " (" << restored << " sessions restored)";
  out << "\n" << std::flush;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interactive table extraction from text collections", "textable"};
  app.require_subcommand(0, 1);

  std::string docs, nuggets_out, nuggets_in, out_path;
  auto* extract = app.add_subcommand("extract", "run built-in extractors and write an interchange file");
  extract->add_option("--docs", docs, "documents (.jsonl)")->required();
  extract->add_option("--out", out_path, "interchange output (.jsonl)")->required();

  auto* import = app.add_subcommand("import", "validate an externally produced interchange file");
  import->add_option("--docs", docs, "documents (.jsonl)")->required();
  import->add_option("--nuggets", nuggets_in, "interchange input (.jsonl)")->required();
  import->add_option("--out", out_path, "write the validated, completed nuggets here");

  MatchOptions match_opts;
  auto* match = app.add_subcommand("match", "run interactive matching and build the table");
  add_match_flags(*match, match_opts);

  std::string table_path, gt, report_out;
  auto* eval = app.add_subcommand("eval", "score a table against ground truth");
  eval->add_option("--table", table_path, "table (.csv or .json)")->required();
  eval->add_option("--gt", gt, "ground truth (.jsonl)")->required();
  eval->add_option("--docs", docs, "documents (.jsonl)")->required();
  eval->add_option("--out", report_out, "machine-readable report (.json)");

  std::string host = "127.0.0.1", state_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "bind port (0 picks a free one)")->capture_default_str();
  serve->add_option("--state-dir", state_dir, "persist sessions here");

  SynthConfig synth_cfg;
  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "generate the planted-cluster benchmark fixture");
  synth->add_option("--seed", synth_cfg.seed, "random seed")->capture_default_str();
  synth->add_option("--documents", synth_cfg.documents, "number of documents")->capture_default_str();
  synth->add_option("--out-dir", out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    // Checked here rather than by CLI11 so an unknown flag is reported before a missing subcommand.
    if (app.get_subcommands().empty()) throw CLI::RequiredError("A subcommand");
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    if (*extract) {
      const auto collection = load_documents(docs);
      const auto nuggets = extract_collection(collection);
      write_interchange(out_path, nuggets);
      err << nuggets.size() << " nuggets from " << collection.size() << " documents\n";
      return 0;
    }
    if (*import) {
      const auto collection = load_documents(docs);
      const auto nuggets = import_interchange(nuggets_in, collection);
      if (!out_path.empty()) write_interchange(out_path, nuggets);
      err << nuggets.size() << " nuggets valid\n";
      return 0;
    }
    if (*match) return cmd_match(match_opts, in, out, err);
    if (*eval) return cmd_eval(table_path, gt, docs, report_out, out);
    if (*serve) return cmd_serve(host, port, state_dir, out);
    if (*synth) {
      const auto fx = generate_fixture(synth_cfg);
      const auto paths = write_fixture(fx, out_dir);
      out << "documents: " << paths.documents.string() << "\nnuggets: " << paths.nuggets.string()
          << "\nvectors: " << paths.vectors.string() << "\nlabelmap: " << paths.label_map.string()
          << "\nground truth: " << paths.truth.string() << "\nattributes: ";
      for (std::size_t i = 0; i < fx.attributes.size(); ++i) out << (i ? "," : "") << fx.attributes[i];
      out << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace textable
