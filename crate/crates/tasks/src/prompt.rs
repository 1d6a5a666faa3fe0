//! Chain-of-thought task prompts.
//!
//! Both prompts carry exactly two image slots (IMAGE#1, IMAGE#2), the
//! step-by-step scaffold, and the closing instruction that pins the answer
//! format the extractor relies on.

use crate::example::{Task, TaskExample};

const NLVR2_TEMPLATE: &str = r#"Carefully examine a pair of images: the left IMAGE#1<Img><ImageHere></Img> and the right IMAGE#2<Img><ImageHere></Img>.
Determine whether the following statement is true about the pair of images:
'{Statement}'
Jointly reasoning about the statement grounded in IMAGE#1 and IMAGE#2.
The task requires compositional joint reasoning, including quantities, comparisons, and relations. Let's think step by step.
Please start your response with "Let's think step by step." and end with "Therefore, the answer (TRUE or FALSE) is"."#;

const BISON_TEMPLATE: &str = r#"Carefully examine the two similar images of IMAGE#1<Img><ImageHere></Img> and IMAGE#2<Img><ImageHere></Img>.
Given the following caption, you must select which of two images best matches the caption.
The caption is: '{Caption}'.
This task requires fine-grained visual reasoning between the caption and each image. Let's think step by step.
Please start your response with "Let's think step by step." and end with "Therefore, the answer (IMAGE#1 or IMAGE#2) is"."#;

/// Fills the task template with the example's caption or statement.
pub fn build_task_prompt(example: &TaskExample) -> String {
    match example.task {
        Task::Bison => BISON_TEMPLATE.replace("{Caption}", &example.text),
        Task::Nlvr2 => NLVR2_TEMPLATE.replace("{Statement}", &example.text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::{Answer, MediaRef, TaskExample};

    fn example(task: Task) -> TaskExample {
        let gold = match task {
            Task::Bison => Answer::Image1,
            Task::Nlvr2 => Answer::True,
        };
        TaskExample::new(
            task,
            "x",
            (
                MediaRef::from_locator("left.jpg"),
                MediaRef::from_locator("right.jpg"),
            ),
            "a red bicycle leaning on a fence",
            gold,
        )
        .unwrap()
    }

    #[test]
    fn nlvr2_prompt_names_the_truth_labels() {
        let prompt = build_task_prompt(&example(Task::Nlvr2));
        assert!(prompt.contains("the answer (TRUE or FALSE) is"));
        assert!(prompt.contains("'a red bicycle leaning on a fence'"));
        assert!(prompt.contains("Let's think step by step."));
    }

    #[test]
    fn bison_prompt_names_the_image_labels() {
        let prompt = build_task_prompt(&example(Task::Bison));
        assert!(prompt.contains("the answer (IMAGE#1 or IMAGE#2) is"));
        assert!(prompt.contains("The caption is: 'a red bicycle leaning on a fence'."));
    }

    #[test]
    fn both_prompts_carry_exactly_two_image_slots() {
        for task in [Task::Bison, Task::Nlvr2] {
            let prompt = build_task_prompt(&example(task));
            assert_eq!(prompt.matches("<ImageHere>").count(), 2, "{task:?}");
            assert!(prompt.contains("IMAGE#1<Img><ImageHere></Img>"));
            assert!(prompt.contains("IMAGE#2<Img><ImageHere></Img>"));
        }
    }
}
