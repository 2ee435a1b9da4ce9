//! Machine-translation instruction prompt.

use serde::{Deserialize, Serialize};

use crate::lang::Lang;

pub const MT_SYSTEM_TEMPLATE: &str = include_str!("../../assets/mt_system_prompt.txt");
pub const MT_USER_TEMPLATE: &str = include_str!("../../assets/mt_user_prompt.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }
}

/// System + user messages asking for a `source` to `target` translation of
/// `text`.
pub fn translation_messages(source: Lang, target: Lang, text: &str) -> Vec<ChatMessage> {
    let fill = |template: &str| {
        template
            .replace("{source_lang}", source.display_name())
            .replace("{target_lang}", target.display_name())
    };
    // user_input is substituted last so braces inside the text stay literal.
    let user = fill(MT_USER_TEMPLATE).replace("{user_input}", text);
    vec![ChatMessage::system(fill(MT_SYSTEM_TEMPLATE)), ChatMessage::user(user)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_prompt_wording() {
        let msgs = translation_messages(Lang::Zh, Lang::En, "你好");
        assert_eq!(
            msgs[0].content,
            "You are a professional, authentic translation engine. specializing in translation from Chinese to English.\n\
             You only return the translated text, without any explanations."
        );
        assert_eq!(msgs[0].role, Role::System);
        assert_eq!(msgs[1].role, Role::User);
    }

    #[test]
    fn user_prompt_substitution() {
        let msgs = translation_messages(Lang::En, Lang::Zh, "a {source_lang} b");
        let user = &msgs[1].content;
        assert!(user.starts_with("DEFINE ROLE AS \"SNS Linguistic Translator\":\n"));
        assert!(user.contains(
            "task = \"This is an English to Chinese translation, please provide the Chinese translation for this text.\""
        ));
        assert!(user.contains("source_text = INPUT(\"\"\"\n  a {source_lang} b\"\"\")"));
        assert!(user.ends_with("no explanations and no English characters."));
        assert!(!user.contains("{target_lang}"));
    }
}
