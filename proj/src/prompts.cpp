#include "pathseeker/prompts.hpp"

#include <sstream>

namespace pathseeker::prompts {

const std::string& agent_preamble() {
    static const std::string text = R"(You are an expert biologist exploring a biological pathway graph to gather evidence for a question. The graph stores pathways as triples: head entity | tail entity | relation | biological processes. You interact with it through two tools:

1. search_biopathway_subgraph_global(['keyword, keyword, ...'])
   Retrieves a connected subgraph of pathways most relevant to the keywords from the whole graph. Convert the full question content into keywords to enhance retrieval quality.

2. search_biopathway_triple_N_hop_subgraph(history_line_id, ['keyword, keyword, ...'])
   Retrieves the pathways within a few hops of a previously shown pathway line, ranked against the keywords. Use the line id shown at the start of that line.

Each observation lists newly found pathways, one per line, prefixed with a unique line id. Previously seen pathways are not repeated.

Respond every turn in exactly this format:

Action: Thought: <your reasoning about what to do next> Action:
     <one tool call>
     End Action

When you have gathered enough evidence, finish the exploration by replying:

Action: Thought: <closing thought>
Answer:
Finished.)";
    return text;
}

const std::string& final_reasoner(bool true_false) {
    static const std::string open_text = R"(You are an expert biologist. Based only on the pathway observations listed below, answer the question. Weigh the evidence in the observations; do not rely on outside knowledge unless the observations are silent. Give a concise, direct answer.)";
    static const std::string tf_text = R"(You are an expert biologist. Based only on the pathway observations listed below, answer the question. Weigh the evidence in the observations; do not rely on outside knowledge unless the observations are silent. Conclude with a standalone "Yes" or "No" verdict.)";
    return true_false ? tf_text : open_text;
}

const std::string& cot_instruction() {
    static const std::string text = R"(You are an expert biologist answering a question about biological pathways. Generate step-by-step reasoning before giving your final answer. End with a line starting "Answer:" followed by your conclusion; for yes/no questions conclude with a standalone "Yes" or "No".)";
    return text;
}

const std::vector<CotShot>& cot_shots() {
    static const std::vector<CotShot> shots = {
        {"Insulin stimulates glucose uptake in muscle cells via the GLUT4 transporter. If "
         "insulin receptor signaling is blocked, does glucose uptake through GLUT4 decrease?",
         "Step 1: Insulin binds its receptor and activates PI3K/AKT signaling.\n"
         "Step 2: AKT signaling drives translocation of GLUT4 vesicles to the plasma membrane.\n"
         "Step 3: Blocking the insulin receptor removes the upstream signal, so GLUT4 stays "
         "sequestered and uptake falls.\nAnswer: Yes"},
        {"Catalase converts hydrogen peroxide into water and oxygen. In cells lacking "
         "catalase entirely, does hydrogen peroxide become harmless by default?",
         "Step 1: Catalase is a major route for hydrogen peroxide detoxification.\n"
         "Step 2: Without catalase, peroxide accumulates unless alternative enzymes such as "
         "glutathione peroxidase compensate.\nStep 3: Accumulated peroxide damages lipids, "
         "proteins and DNA, so it is not harmless by default.\nAnswer: No"},
    };
    return shots;
}

const std::string& judge_rubric() {
    static const std::string text = R"(You are grading a candidate answer to a biology question against a reference answer. Judge only whether the candidate conveys the same conclusion and essential mechanism as the reference; wording differences, extra correct detail, and formatting do not matter. Missing the conclusion, contradicting the reference, or answering a different question is INCORRECT.

After reviewing the worked examples, grade the final case. Reply with your brief reasoning, then a final line containing exactly CORRECT or INCORRECT.)";
    return text;
}

const std::vector<JudgeExample>& judge_examples() {
    static const std::vector<JudgeExample> examples = {
        {"Which enzyme catalyzes the rate-limiting step of glycolysis?",
         "Phosphofructokinase-1 (PFK-1) catalyzes the committed, rate-limiting step.",
         "The rate-limiting step is carried out by phosphofructokinase.", true},
        {"Does activation of AMPK promote fatty acid oxidation in hepatocytes?",
         "Yes. AMPK phosphorylates and inhibits ACC, lowering malonyl-CoA and releasing "
         "CPT1-mediated fatty acid oxidation.",
         "No, AMPK blocks fatty acid oxidation by activating ACC.", false},
        {"What is the downstream effect of NOX4-derived reactive oxygen species on AMPK in "
         "liver cells?",
         "NOX4-generated ROS suppress AMPK signaling, which promotes lipid accumulation.",
         "Reactive oxygen species produced by NOX4 inhibit AMPK, favoring steatosis.", true},
        {"Name the receptor through which adiponectin signals in the liver.",
         "Adiponectin signals mainly through ADIPOR1 (with ADIPOR2 also contributing) in "
         "hepatocytes.",
         "Adiponectin acts through the insulin receptor.", false},
        {"How does SREBF1 influence stearoyl-CoA desaturase expression?",
         "SREBF1 is a transcription factor that induces SCD expression, increasing "
         "monounsaturated fatty acid synthesis.",
         "SCD transcription rises because SREBP-1 activates the SCD gene.", true},
    };
    return examples;
}

std::string judge_user_message(const std::string& question, const std::string& gold,
                               const std::string& candidate) {
    std::ostringstream out;
    out << judge_rubric() << "\n";
    const auto& examples = judge_examples();
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const JudgeExample& ex = examples[i];
        out << "\nExample " << (i + 1) << "\nQuestion: " << ex.question
            << "\nReference answer: " << ex.gold << "\nCandidate answer: " << ex.candidate
            << "\nVerdict: " << (ex.correct ? "CORRECT" : "INCORRECT") << "\n";
    }
    out << "\nCase to grade\nQuestion: " << question << "\nReference answer: " << gold
        << "\nCandidate answer: " << candidate << "\nVerdict:";
    return out.str();
}

std::string task_user_message(const std::string& question) {
    return "Please explore pathways to find relevant information regarding the following "
           "question: " +
           question;
}

const std::string& retry_instruction() {
    static const std::string text =
        "Your last response did not contain a recognizable action. Reply again using the "
        "required format: a tool call between \"Action:\" and \"End Action\", or "
        "\"Finished.\" to stop.";
    return text;
}

}  // namespace pathseeker::prompts
