#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crowdlab/aggregation.hpp"
#include "crowdlab/benchmark_io.hpp"
#include "crowdlab/diagnostics.hpp"
#include "crowdlab/parsing.hpp"
#include "crowdlab/prompts.hpp"
#include "crowdlab/response_log.hpp"
#include "crowdlab/simulation.hpp"
#include "crowdlab/types.hpp"
#include "crowdlab/version.hpp"

namespace py = pybind11;
using namespace crowdlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "crowd aggregation laboratory: polls, aggregation rules, diagnostics, simulators";

  py::register_exception<Error>(m, "CrowdlabError");

  py::enum_<Elicitation>(m, "Elicitation")
      .value("DIRECT", Elicitation::Direct)
      .value("PREDICTION", Elicitation::Prediction)
      .value("CONFIDENCE", Elicitation::Confidence);

  py::enum_<Method>(m, "Method")
      .value("MAJORITY", Method::Majority)
      .value("HIGHEST_CONFIDENCE", Method::HighestConfidence)
      .value("CONFIDENCE_WEIGHTED", Method::ConfidenceWeighted)
      .value("PREDICTION_WEIGHTED", Method::PredictionWeighted)
      .value("SURPRISINGLY_POPULAR", Method::SurprisinglyPopular)
      .value("INVERSE_SP", Method::InverseSp);

  py::enum_<PredictionWeighting>(m, "PredictionWeighting")
      .value("OWN_VOTE", PredictionWeighting::OwnVote)
      .value("CANONICAL", PredictionWeighting::Canonical);

  py::enum_<Composition>(m, "Composition")
      .value("EXACT", Composition::Exact)
      .value("STOCHASTIC", Composition::Stochastic);

  py::class_<Question>(m, "Question")
      .def(py::init([](std::string id, std::string text, std::vector<std::string> options,
                       std::optional<std::int32_t> truth, std::string benchmark,
                       std::optional<std::string> notes) {
             Question q{std::move(id), std::move(text), std::move(options), truth,
                        std::move(benchmark), std::move(notes)};
             validate(q);
             return q;
           }),
           py::arg("id"), py::arg("text"), py::arg("options"), py::arg("truth") = py::none(),
           py::arg("benchmark") = "", py::arg("notes") = py::none())
      .def_readonly("id", &Question::id)
      .def_readonly("text", &Question::text)
      .def_readonly("options", &Question::options)
      .def_readonly("truth", &Question::truth)
      .def_readonly("benchmark", &Question::benchmark)
      .def_readonly("notes", &Question::notes);

  py::class_<Response>(m, "Response")
      .def(py::init([](std::string question_id, std::string respondent_id, double temperature,
                       Elicitation elicitation, Vote vote, std::optional<double> confidence,
                       std::optional<std::vector<double>> predicted_shares,
                       std::optional<std::string> raw_text) {
             Response r{std::move(question_id), std::move(respondent_id), temperature,
                        elicitation,            vote,                     confidence,
                        std::move(predicted_shares), std::move(raw_text)};
             return r;
           }),
           py::arg("question_id"), py::arg("respondent_id") = "", py::arg("temperature") = 1.0,
           py::arg("elicitation") = Elicitation::Direct, py::arg("vote") = py::none(),
           py::arg("confidence") = py::none(), py::arg("predicted_shares") = py::none(),
           py::arg("raw_text") = py::none())
      .def_readonly("question_id", &Response::question_id)
      .def_readonly("respondent_id", &Response::respondent_id)
      .def_readonly("temperature", &Response::temperature)
      .def_readonly("elicitation", &Response::elicitation)
      .def_readonly("vote", &Response::vote)
      .def_readonly("confidence", &Response::confidence)
      .def_readonly("predicted_shares", &Response::predicted_shares)
      .def_readonly("raw_text", &Response::raw_text);

  py::class_<Condition>(m, "Condition")
      .def(py::init<>())
      .def_readwrite("temperature", &Condition::temperature)
      .def_readwrite("models", &Condition::models)
      .def_readwrite("elicitations", &Condition::elicitations);

  py::class_<Poll>(m, "Poll")
      .def(py::init([](Question question, std::vector<Response> responses) {
             Poll p{std::move(question), std::move(responses), {}};
             validate(p);
             return p;
           }),
           py::arg("question"), py::arg("responses"))
      .def_readonly("question", &Poll::question)
      .def_readonly("responses", &Poll::responses)
      .def_readonly("condition", &Poll::condition);

  m.def("vote_shares", &vote_shares, py::arg("poll"));
  m.def("mean_predicted_shares", &mean_predicted_shares, py::arg("poll"));
  m.def("filter_clear", &filter_clear, py::arg("poll"));

  py::class_<ParseOutcome>(m, "ParseOutcome")
      .def_readonly("vote", &ParseOutcome::vote)
      .def_readonly("confidence", &ParseOutcome::confidence)
      .def_readonly("predicted_shares", &ParseOutcome::predicted_shares)
      .def_readonly("flags", &ParseOutcome::flags);

  m.def("parse_direct", &parse_direct, py::arg("text"), py::arg("options"));
  m.def(
      "parse_prediction",
      [](std::string_view text, const std::vector<std::string>& options) {
        return parse_prediction(text, options);
      },
      py::arg("text"), py::arg("options"));
  m.def(
      "parse_confidence",
      [](std::string_view text, const std::vector<std::string>& options) {
        return parse_confidence(text, options);
      },
      py::arg("text"), py::arg("options"));
  m.def("parse_forced_choice", &parse_forced_choice, py::arg("text"));
  m.def("parse_response", &parse_response, py::arg("text"), py::arg("elicitation"),
        py::arg("options"));

  py::class_<AggregateDecision>(m, "AggregateDecision")
      .def_readonly("question_id", &AggregateDecision::question_id)
      .def_readonly("method", &AggregateDecision::method)
      .def_readonly("chosen", &AggregateDecision::chosen)
      .def_readonly("scores", &AggregateDecision::scores)
      .def_readonly("tie_broken", &AggregateDecision::tie_broken);

  m.def("majority_vote", &majority_vote, py::arg("poll"));
  m.def("highest_confidence", &highest_confidence, py::arg("poll"));
  m.def("confidence_weighted", &confidence_weighted, py::arg("poll"));
  m.def("prediction_weighted", &prediction_weighted, py::arg("poll"),
        py::arg("weighting") = PredictionWeighting::OwnVote);
  m.def("surprisingly_popular", &surprisingly_popular, py::arg("poll"));
  m.def("inverse_sp", &inverse_sp, py::arg("poll"));
  m.def(
      "plurality_choice", [](const Poll& poll) { return plurality_choice(poll); },
      py::arg("poll"));

  py::class_<MethodOutcome>(m, "MethodOutcome")
      .def_readonly("method", &MethodOutcome::method)
      .def_readonly("decision", &MethodOutcome::decision)
      .def_readonly("error", &MethodOutcome::error);
  m.def("aggregate_all", &aggregate_all, py::arg("poll"),
        py::arg("weighting") = PredictionWeighting::OwnVote);

  py::class_<BootstrapCi>(m, "BootstrapCi")
      .def_readonly("point", &BootstrapCi::point)
      .def_readonly("low", &BootstrapCi::low)
      .def_readonly("high", &BootstrapCi::high);
  m.def("bootstrap_ci", &bootstrap_ci, py::arg("per_question_correct"), py::arg("level") = 0.95,
        py::arg("resamples") = kDefaultBootstrapResamples,
        py::arg("seed") = kDefaultBootstrapSeed);

  m.def("accuracy", &accuracy, py::arg("decisions"), py::arg("questions"));
  m.def("cohen_kappa", &cohen_kappa, py::arg("ratings_a"), py::arg("ratings_b"));
  m.def("fleiss_kappa", &fleiss_kappa, py::arg("counts"));
  m.def("vote_entropy", &vote_entropy, py::arg("shares"));
  m.def("plurality_flip_rate", &plurality_flip_rate, py::arg("low_temperature"),
        py::arg("high_temperature"));

  py::class_<ErrorConcentration>(m, "ErrorConcentration")
      .def_readonly("value", &ErrorConcentration::value)
      .def_readonly("trivially_concentrated", &ErrorConcentration::trivially_concentrated);
  m.def("error_concentration", &error_concentration, py::arg("wrong_answers"),
        py::arg("option_count"));

  m.def("answer_truth_correlations", &answer_truth_correlations, py::arg("rater_rows"),
        py::arg("truth"));

  py::class_<CalibrationBin>(m, "CalibrationBin")
      .def_readonly("mean_confidence", &CalibrationBin::mean_confidence)
      .def_readonly("accuracy", &CalibrationBin::accuracy)
      .def_readonly("count", &CalibrationBin::count);
  py::class_<Calibration>(m, "Calibration")
      .def_readonly("bins", &Calibration::bins)
      .def_readonly("ece", &Calibration::ece)
      .def_readonly("total", &Calibration::total);
  m.def("reliability_diagram", &reliability_diagram, py::arg("samples"),
        py::arg("bins") = kDefaultCalibrationBins);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("rater", &CurvePoint::rater)
      .def_readonly("question_id", &CurvePoint::question_id)
      .def_readonly("x", &CurvePoint::x)
      .def_readonly("y", &CurvePoint::y);
  py::class_<ConsensusCurves>(m, "ConsensusCurves")
      .def_readonly("agreement_confidence", &ConsensusCurves::agreement_confidence)
      .def_readonly("predicted_vs_observed", &ConsensusCurves::predicted_vs_observed);
  m.def("consensus_curves", &consensus_curves, py::arg("polls"));
  m.def("agreement_confidence_curve", &agreement_confidence_curve, py::arg("polls"));
  m.def("predicted_vs_observed_curve", &predicted_vs_observed_curve, py::arg("polls"));

  py::class_<PrelecParams>(m, "PrelecParams")
      .def(py::init<>())
      .def_readwrite("informed_fraction", &PrelecParams::informed_fraction)
      .def_readwrite("informed_prediction", &PrelecParams::informed_prediction)
      .def_readwrite("uninformed_prediction", &PrelecParams::uninformed_prediction)
      .def_readwrite("composition", &PrelecParams::composition)
      .def_readwrite("deterministic_votes", &PrelecParams::deterministic_votes)
      .def_readwrite("randomize_truth", &PrelecParams::randomize_truth);
  m.def("simulate_prelec", &simulate_prelec, py::arg("params"), py::arg("n_respondents"),
        py::arg("n_questions"), py::arg("seed"));

  py::class_<CorrelatedCrowdParams>(m, "CorrelatedCrowdParams")
      .def(py::init<>())
      .def_readwrite("respondents", &CorrelatedCrowdParams::respondents)
      .def_readwrite("independent_accuracy", &CorrelatedCrowdParams::independent_accuracy)
      .def_readwrite("coupling", &CorrelatedCrowdParams::coupling)
      .def_readwrite("attractor_wrong_prob", &CorrelatedCrowdParams::attractor_wrong_prob);
  m.def("simulate_correlated_crowd", &simulate_correlated_crowd, py::arg("params"),
        py::arg("n_questions"), py::arg("seed"));

  py::class_<NullControlParams>(m, "NullControlParams")
      .def(py::init<>())
      .def_readwrite("option_count", &NullControlParams::option_count)
      .def_readwrite("items", &NullControlParams::items)
      .def_readwrite("follow_probs", &NullControlParams::follow_probs)
      .def_readwrite("biases", &NullControlParams::biases);
  m.def("simulate_null_control", &simulate_null_control, py::arg("params"), py::arg("seed"));

  m.def("condorcet_curve", &condorcet_curve, py::arg("p"), py::arg("sizes"));
  m.def("random_string_questions", &random_string_questions, py::arg("count"), py::arg("seed"));

  m.def("load_benchmark", &load_benchmark, py::arg("path"));
  m.def("write_benchmark", &write_benchmark, py::arg("path"), py::arg("questions"));
  m.def("render_prompt", &render_prompt, py::arg("question"), py::arg("elicitation"));

  py::enum_<Grouping>(m, "Grouping")
      .value("PER_MODEL", Grouping::PerModel)
      .value("ENSEMBLE", Grouping::Ensemble);
  m.def(
      "read_log_polls",
      [](const std::string& path, Grouping grouping) {
        return polls_from_log(read_log(path), grouping);
      },
      py::arg("path"), py::arg("grouping") = Grouping::PerModel,
      "Read a response log and rebuild its polls.");

#ifdef CROWDLAB_VERSION_INFO
  m.attr("__version__") = CROWDLAB_VERSION_INFO;
#else
  m.attr("__version__") = kVersion;
#endif
}
