#pragma once

#include <string>
#include <vector>

namespace pathseeker::prompts {

/// System preamble for the exploration loop: task framing, the two search
/// tools, and the action grammar the parser accepts.
const std::string& agent_preamble();

/// System prompt for the closing answer pass over collected observations.
/// `true_false` variants instruct a standalone Yes/No verdict.
const std::string& final_reasoner(bool true_false);

/// Chain-of-thought baseline instruction (no graph access).
const std::string& cot_instruction();

/// Two fixed worked examples for the 2-shot chain-of-thought baseline,
/// already formatted as alternating user/assistant turns.
struct CotShot {
    std::string question;
    std::string answer;
};
const std::vector<CotShot>& cot_shots();

/// Grading rubric for the open-ended judge. The prompt ends by requiring a
/// terminal CORRECT or INCORRECT token on its own line.
const std::string& judge_rubric();

/// The five fixed worked examples embedded in every judge prompt.
struct JudgeExample {
    std::string question;
    std::string gold;
    std::string candidate;
    bool correct;
};
const std::vector<JudgeExample>& judge_examples();

/// Full judge user message for one candidate answer: rubric examples plus
/// the case under review.
std::string judge_user_message(const std::string& question, const std::string& gold,
                               const std::string& candidate);

/// User message asking the agent to work on one question.
std::string task_user_message(const std::string& question);

/// Reminder sent once after an unparseable model turn.
const std::string& retry_instruction();

}  // namespace pathseeker::prompts
