//! Word lists for the bundled tagger.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::PosTag;

/// Lexical class before context is taken into account.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Lex {
    Fixed(PosTag),
    /// Determiner before a nominal, pronoun otherwise (`this`, `some`).
    DetPron,
    /// Determiner before a nominal, `OTHER` otherwise (`what`, `no`).
    DetOther,
    Have,
    Do,
    Like,
    Verb(VerbForm),
    UnknownIng,
    UnknownEd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum VerbForm {
    Base,
    ThirdSingular,
    Past,
    Participle,
    PastOrParticiple,
    Ing,
}

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "my", "your", "his", "its", "our", "their", "every", "another", "such",
    "whose",
];

const DET_PRON: &[&str] = &[
    "this", "that", "these", "those", "some", "any", "all", "each", "both", "either", "neither",
    "many", "few", "several", "enough",
];

const DET_OTHER: &[&str] = &["what", "which", "whatever", "whichever", "no"];

const PRONOUNS: &[&str] = &[
    "i",
    "you",
    "he",
    "she",
    "it",
    "we",
    "they",
    "me",
    "him",
    "us",
    "them",
    "myself",
    "yourself",
    "himself",
    "herself",
    "itself",
    "ourselves",
    "yourselves",
    "themselves",
    "mine",
    "yours",
    "hers",
    "ours",
    "theirs",
    "who",
    "whom",
    "someone",
    "somebody",
    "anyone",
    "anybody",
    "everyone",
    "everybody",
    "nobody",
    "there",
    "i'm",
    "you're",
    "we're",
    "they're",
    "he's",
    "she's",
    "it's",
    "that's",
    "there's",
    "here's",
    "what's",
    "who's",
    "let's",
    "i've",
    "you've",
    "we've",
    "they've",
    "i'll",
    "you'll",
    "he'll",
    "she'll",
    "we'll",
    "they'll",
    "it'll",
    "i'd",
    "you'd",
    "he'd",
    "she'd",
    "we'd",
    "they'd",
];

const NOUNS: &[&str] = &[
    "nothing",
    "something",
    "anything",
    "everything",
    "thing",
    "things",
    "king",
    "ring",
    "wing",
    "string",
    "spring",
    "morning",
    "evening",
    "ceiling",
    "sibling",
    "darling",
    "pudding",
    "wedding",
    "building",
    "meeting",
    "animal",
    "proposal",
    "individual",
    "trial",
    "material",
    "hospital",
    "capital",
    "signal",
    "criminal",
    "rival",
    "ritual",
    "arrival",
    "approval",
    "total",
    "motive",
    "objective",
    "alternative",
    "detective",
    "native",
    "executive",
    "representative",
    "topic",
    "logic",
    "music",
    "traffic",
    "critic",
    "panic",
    "clinic",
    "republic",
    "family",
    "ally",
    "rally",
    "belly",
    "supply",
    "bullet",
    "children",
    "women",
    "men",
    "citizen",
    "citizens",
    "people",
    "person",
    "god",
    "time",
    "way",
    "world",
    "life",
    "year",
    "years",
    "day",
    "days",
];

pub(crate) const BE_FORMS: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "isn't", "aren't", "wasn't",
    "weren't", "ain't",
];

const AUX_FIXED: &[&str] = &["don't", "doesn't", "didn't", "haven't", "hasn't", "hadn't"];

const MODALS: &[&str] = &[
    "will",
    "would",
    "can",
    "could",
    "shall",
    "should",
    "may",
    "might",
    "must",
    "won't",
    "wouldn't",
    "can't",
    "cannot",
    "couldn't",
    "shouldn't",
    "mustn't",
    "shan't",
    "mightn't",
    "ought",
];

const PREPOSITIONS: &[&str] = &[
    "of",
    "in",
    "on",
    "at",
    "for",
    "with",
    "about",
    "against",
    "from",
    "by",
    "into",
    "onto",
    "upon",
    "over",
    "under",
    "through",
    "between",
    "among",
    "after",
    "before",
    "during",
    "without",
    "within",
    "until",
    "as",
    "than",
    "toward",
    "towards",
    "across",
    "behind",
    "beyond",
    "near",
    "around",
    "despite",
    "per",
    "via",
    "off",
    "throughout",
    "inside",
    "outside",
    "regarding",
    "unlike",
    "along",
    "amongst",
    "above",
    "below",
    "beside",
    "besides",
    "except",
];

const OTHERS: &[&str] = &[
    "and", "or", "but", "if", "so", "because", "though", "although", "while", "whether", "when",
    "where", "why", "how", "yet", "nor", "unless", "since", "whereas", "whenever", "wherever",
    "however", "oh", "ah", "yeah", "yes", "ok", "okay", "hey", "wow", "lol", "well", "please",
    "thanks", "hmm", "um",
];

const ADVERBS: &[&str] = &[
    "not",
    "very",
    "really",
    "just",
    "also",
    "only",
    "even",
    "still",
    "never",
    "always",
    "often",
    "quite",
    "too",
    "already",
    "actually",
    "perhaps",
    "maybe",
    "here",
    "now",
    "then",
    "again",
    "ever",
    "almost",
    "rather",
    "ago",
    "away",
    "back",
    "up",
    "out",
    "down",
    "exactly",
    "least",
    "most",
    "more",
    "less",
    "much",
    "instead",
    "soon",
    "sometimes",
    "therefore",
    "thus",
    "indeed",
    "anyway",
    "somehow",
    "later",
    "once",
    "twice",
    "else",
    "otherwise",
    "together",
    "far",
    "forward",
    "hardly",
    "barely",
    "nearly",
    "merely",
    "simply",
    "certainly",
    "probably",
];

const ADJECTIVES: &[&str] = &[
    "good",
    "bad",
    "new",
    "old",
    "great",
    "big",
    "small",
    "little",
    "long",
    "short",
    "high",
    "low",
    "right",
    "wrong",
    "true",
    "false",
    "real",
    "sure",
    "able",
    "whole",
    "free",
    "full",
    "best",
    "better",
    "worse",
    "worst",
    "same",
    "different",
    "other",
    "own",
    "last",
    "first",
    "next",
    "strange",
    "wild",
    "white",
    "black",
    "red",
    "blue",
    "green",
    "purple",
    "ready",
    "happy",
    "sad",
    "clear",
    "pregnant",
    "stupid",
    "smart",
    "dumb",
    "nice",
    "fine",
    "simple",
    "hard",
    "easy",
    "certain",
    "likely",
    "vast",
    "unjust",
    "unfair",
    "young",
    "dead",
    "alive",
    "entire",
    "poor",
    "rich",
    "safe",
    "common",
    "private",
    "important",
    "willing",
    "open",
    "early",
    "silly",
    "ugly",
    "friendly",
    "lovely",
    "lonely",
    "holy",
    "daily",
    "only",
    "main",
    "fair",
    "huge",
    "tiny",
    "deep",
    "second",
    "third",
    "single",
    "fresh",
    "quiet",
    "wise",
    "brave",
    "evil",
    "guilty",
    "innocent",
    "obvious",
    "absurd",
    "ridiculous",
    "brilliant",
    "recent",
    "present",
    "honest",
    "average",
];

/// Irregular verbs as (base, past, past participle).
const IRREGULAR: &[(&str, &str, &str)] = &[
    ("arise", "arose", "arisen"),
    ("bear", "bore", "born"),
    ("beat", "beat", "beaten"),
    ("become", "became", "become"),
    ("begin", "began", "begun"),
    ("bet", "bet", "bet"),
    ("bind", "bound", "bound"),
    ("bite", "bit", "bitten"),
    ("bleed", "bled", "bled"),
    ("blow", "blew", "blown"),
    ("break", "broke", "broken"),
    ("breed", "bred", "bred"),
    ("bring", "brought", "brought"),
    ("build", "built", "built"),
    ("buy", "bought", "bought"),
    ("catch", "caught", "caught"),
    ("choose", "chose", "chosen"),
    ("come", "came", "come"),
    ("cost", "cost", "cost"),
    ("cut", "cut", "cut"),
    ("deal", "dealt", "dealt"),
    ("dig", "dug", "dug"),
    ("draw", "drew", "drawn"),
    ("drink", "drank", "drunk"),
    ("drive", "drove", "driven"),
    ("eat", "ate", "eaten"),
    ("fall", "fell", "fallen"),
    ("feed", "fed", "fed"),
    ("feel", "felt", "felt"),
    ("fight", "fought", "fought"),
    ("find", "found", "found"),
    ("flee", "fled", "fled"),
    ("fly", "flew", "flown"),
    ("forbid", "forbade", "forbidden"),
    ("forget", "forgot", "forgotten"),
    ("forgive", "forgave", "forgiven"),
    ("freeze", "froze", "frozen"),
    ("get", "got", "gotten"),
    ("give", "gave", "given"),
    ("go", "went", "gone"),
    ("grow", "grew", "grown"),
    ("hang", "hung", "hung"),
    ("hear", "heard", "heard"),
    ("hide", "hid", "hidden"),
    ("hit", "hit", "hit"),
    ("hold", "held", "held"),
    ("hurt", "hurt", "hurt"),
    ("keep", "kept", "kept"),
    ("know", "knew", "known"),
    ("lay", "laid", "laid"),
    ("lead", "led", "led"),
    ("leave", "left", "left"),
    ("lend", "lent", "lent"),
    ("let", "let", "let"),
    ("lose", "lost", "lost"),
    ("make", "made", "made"),
    ("mean", "meant", "meant"),
    ("meet", "met", "met"),
    ("overcome", "overcame", "overcome"),
    ("pay", "paid", "paid"),
    ("prove", "proved", "proven"),
    ("put", "put", "put"),
    ("quit", "quit", "quit"),
    ("read", "read", "read"),
    ("rid", "rid", "rid"),
    ("ride", "rode", "ridden"),
    ("ring", "rang", "rung"),
    ("rise", "rose", "risen"),
    ("run", "ran", "run"),
    ("say", "said", "said"),
    ("see", "saw", "seen"),
    ("seek", "sought", "sought"),
    ("sell", "sold", "sold"),
    ("send", "sent", "sent"),
    ("set", "set", "set"),
    ("shake", "shook", "shaken"),
    ("shoot", "shot", "shot"),
    ("show", "showed", "shown"),
    ("shut", "shut", "shut"),
    ("sing", "sang", "sung"),
    ("sink", "sank", "sunk"),
    ("sit", "sat", "sat"),
    ("sleep", "slept", "slept"),
    ("slide", "slid", "slid"),
    ("speak", "spoke", "spoken"),
    ("spend", "spent", "spent"),
    ("split", "split", "split"),
    ("spread", "spread", "spread"),
    ("stand", "stood", "stood"),
    ("steal", "stole", "stolen"),
    ("stick", "stuck", "stuck"),
    ("strike", "struck", "struck"),
    ("swear", "swore", "sworn"),
    ("swim", "swam", "swum"),
    ("take", "took", "taken"),
    ("teach", "taught", "taught"),
    ("tear", "tore", "torn"),
    ("tell", "told", "told"),
    ("think", "thought", "thought"),
    ("throw", "threw", "thrown"),
    ("undergo", "underwent", "undergone"),
    ("understand", "understood", "understood"),
    ("wake", "woke", "woken"),
    ("wear", "wore", "worn"),
    ("win", "won", "won"),
    ("withdraw", "withdrew", "withdrawn"),
    ("write", "wrote", "written"),
];

const REGULAR: &[&str] = &[
    "abolish",
    "abort",
    "accept",
    "accuse",
    "achieve",
    "add",
    "admit",
    "agree",
    "allow",
    "answer",
    "appear",
    "apply",
    "argue",
    "arrest",
    "ask",
    "assume",
    "attach",
    "attack",
    "attempt",
    "avoid",
    "ban",
    "base",
    "believe",
    "belong",
    "blame",
    "call",
    "care",
    "carry",
    "cause",
    "change",
    "check",
    "claim",
    "compare",
    "complain",
    "consider",
    "constitute",
    "contain",
    "continue",
    "control",
    "convince",
    "correct",
    "create",
    "debate",
    "decide",
    "defend",
    "define",
    "deny",
    "depend",
    "describe",
    "deserve",
    "design",
    "destroy",
    "detain",
    "die",
    "differ",
    "disagree",
    "discuss",
    "doubt",
    "encounter",
    "end",
    "enjoy",
    "enter",
    "exist",
    "expect",
    "explain",
    "face",
    "fail",
    "fear",
    "fetch",
    "fill",
    "finish",
    "float",
    "follow",
    "force",
    "form",
    "found",
    "gather",
    "guess",
    "happen",
    "hate",
    "help",
    "hope",
    "ignore",
    "imagine",
    "include",
    "increase",
    "insist",
    "intend",
    "involve",
    "join",
    "judge",
    "jump",
    "kick",
    "kill",
    "laugh",
    "learn",
    "limit",
    "listen",
    "live",
    "look",
    "love",
    "marry",
    "matter",
    "mention",
    "mind",
    "miss",
    "move",
    "need",
    "notice",
    "obtain",
    "offer",
    "oppose",
    "own",
    "pass",
    "pick",
    "plan",
    "play",
    "point",
    "prefer",
    "prepare",
    "pretend",
    "prevent",
    "produce",
    "protect",
    "provide",
    "prowl",
    "pull",
    "purchase",
    "push",
    "question",
    "raise",
    "reach",
    "realize",
    "receive",
    "recognize",
    "refuse",
    "reject",
    "remain",
    "remember",
    "remove",
    "repeat",
    "reply",
    "report",
    "require",
    "respond",
    "return",
    "save",
    "seem",
    "serve",
    "share",
    "slip",
    "solve",
    "sound",
    "start",
    "stay",
    "stop",
    "study",
    "suggest",
    "summarize",
    "support",
    "suppose",
    "talk",
    "tend",
    "thank",
    "threaten",
    "touch",
    "tout",
    "treat",
    "try",
    "turn",
    "use",
    "vote",
    "wait",
    "walk",
    "want",
    "watch",
    "wish",
    "wonder",
    "work",
    "worry",
    "abuse",
    "affect",
    "afford",
    "announce",
    "assert",
    "bother",
    "challenge",
    "choke",
    "commit",
    "concern",
    "confuse",
    "count",
    "cover",
    "cry",
    "dare",
    "demand",
    "determine",
    "discover",
    "drop",
    "earn",
    "educate",
    "enforce",
    "establish",
    "excuse",
    "fix",
    "hurry",
    "impose",
    "inform",
    "insult",
    "intervene",
    "kid",
    "lack",
    "last",
    "lie",
    "like",
    "manage",
    "murder",
    "object",
    "order",
    "pray",
    "preach",
    "pretend",
    "promise",
    "prosecute",
    "protest",
    "punish",
    "qualify",
    "quote",
    "rape",
    "reason",
    "reduce",
    "relate",
    "rely",
    "rescue",
    "resist",
    "rule",
    "shout",
    "sign",
    "smell",
    "state",
    "steer",
    "suffer",
    "surprise",
    "survive",
    "teach",
    "trust",
    "understand",
    "value",
    "violate",
    "waste",
    "welcome",
];

fn ends_consonant_vowel_consonant(w: &[u8]) -> bool {
    let vowel = |c: u8| b"aeiou".contains(&c);
    w.len() >= 3
        && !vowel(w[w.len() - 1])
        && vowel(w[w.len() - 2])
        && !vowel(w[w.len() - 3])
        && !b"wxy".contains(&w[w.len() - 1])
}

/// Regular inflections of `base`, including spelling variants that may not
/// exist; extra entries are harmless for lookup.
fn regular_forms(base: &str) -> Vec<(String, VerbForm)> {
    let b = base.as_bytes();
    let mut out = vec![(base.to_string(), VerbForm::Base)];
    let third = if base.ends_with('y') && b.len() > 1 && !b"aeiou".contains(&b[b.len() - 2]) {
        format!("{}ies", &base[..base.len() - 1])
    } else if ["s", "sh", "ch", "x", "z", "o"]
        .iter()
        .any(|s| base.ends_with(s))
    {
        format!("{base}es")
    } else {
        format!("{base}s")
    };
    out.push((third, VerbForm::ThirdSingular));
    let (ed, ing): (Vec<String>, Vec<String>) = if let Some(stem) = base.strip_suffix("ie") {
        (vec![format!("{base}d")], vec![format!("{stem}ying")])
    } else if let Some(stem) = base.strip_suffix('e') {
        (vec![format!("{base}d")], vec![format!("{stem}ing")])
    } else if base.ends_with('y') && b.len() > 1 && !b"aeiou".contains(&b[b.len() - 2]) {
        (
            vec![format!("{}ied", &base[..base.len() - 1])],
            vec![format!("{base}ing")],
        )
    } else if ends_consonant_vowel_consonant(b) {
        let last = base.chars().last().unwrap_or_default();
        (
            vec![format!("{base}ed"), format!("{base}{last}ed")],
            vec![format!("{base}ing"), format!("{base}{last}ing")],
        )
    } else {
        (vec![format!("{base}ed")], vec![format!("{base}ing")])
    };
    out.extend(ed.into_iter().map(|f| (f, VerbForm::PastOrParticiple)));
    out.extend(ing.into_iter().map(|f| (f, VerbForm::Ing)));
    out
}

pub(crate) struct Lexicon {
    words: HashMap<&'static str, Lex>,
    verbs: HashMap<String, VerbForm>,
}

impl Lexicon {
    fn build() -> Self {
        let mut words = HashMap::new();
        let mut put = |list: &[&'static str], lex: Lex| {
            for w in list {
                words.insert(*w, lex);
            }
        };
        put(ADJECTIVES, Lex::Fixed(PosTag::Adj));
        put(ADVERBS, Lex::Fixed(PosTag::Adv));
        put(OTHERS, Lex::Fixed(PosTag::Other));
        put(PREPOSITIONS, Lex::Fixed(PosTag::Prep));
        put(NOUNS, Lex::Fixed(PosTag::Noun));
        put(PRONOUNS, Lex::Fixed(PosTag::Pron));
        put(DETERMINERS, Lex::Fixed(PosTag::Det));
        put(DET_PRON, Lex::DetPron);
        put(DET_OTHER, Lex::DetOther);
        put(&["her"], Lex::DetPron);
        put(MODALS, Lex::Fixed(PosTag::Modal));
        put(BE_FORMS, Lex::Fixed(PosTag::Aux));
        put(AUX_FIXED, Lex::Fixed(PosTag::Aux));
        put(&["have", "has", "had"], Lex::Have);
        put(&["do", "does", "did"], Lex::Do);
        put(&["like"], Lex::Like);
        put(&["to"], Lex::Fixed(PosTag::To));

        let mut verbs = HashMap::new();
        for base in REGULAR {
            for (form, kind) in regular_forms(base) {
                verbs.entry(form).or_insert(kind);
            }
        }
        for (base, past, part) in IRREGULAR {
            verbs.insert(base.to_string(), VerbForm::Base);
            for (form, kind) in regular_forms(base) {
                if kind == VerbForm::ThirdSingular || kind == VerbForm::Ing {
                    verbs.entry(form).or_insert(kind);
                }
            }
            let same = past == part;
            verbs.insert(
                past.to_string(),
                if same {
                    VerbForm::PastOrParticiple
                } else {
                    VerbForm::Past
                },
            );
            if !same {
                verbs.insert(part.to_string(), VerbForm::Participle);
            }
        }
        for (base, _, part) in IRREGULAR {
            // `put`, `cut`, `become`: base and participle coincide.
            if base == part {
                verbs.insert(base.to_string(), VerbForm::Base);
            }
        }
        Lexicon { words, verbs }
    }

    pub(crate) fn get() -> &'static Lexicon {
        static LEX: OnceLock<Lexicon> = OnceLock::new();
        LEX.get_or_init(Lexicon::build)
    }

    pub(crate) fn lookup(&self, word: &str) -> Lex {
        if let Some(lex) = self.words.get(word) {
            return *lex;
        }
        if word.chars().all(|c| !c.is_alphanumeric()) {
            return Lex::Fixed(PosTag::Punct);
        }
        if word.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            return Lex::Fixed(PosTag::Adj);
        }
        if let Some(form) = self.verbs.get(word) {
            return Lex::Verb(*form);
        }
        suffix_class(word)
    }

    /// Participle by lexicon, or by `-ed`/`-en` for words it does not know.
    pub(crate) fn is_participle(&self, word: &str) -> bool {
        match self.verbs.get(word) {
            Some(VerbForm::Participle | VerbForm::PastOrParticiple) => true,
            Some(_) => is_irregular_participle(word),
            None => word.len() > 4 && (word.ends_with("ed") || word.ends_with("en")),
        }
    }
}

fn is_irregular_participle(word: &str) -> bool {
    IRREGULAR.iter().any(|(_, _, p)| *p == word)
}

const ADJ_SUFFIXES: &[&str] = &[
    "ous", "ful", "ive", "able", "ible", "ical", "ic", "less", "ish", "al",
];

fn suffix_class(word: &str) -> Lex {
    let n = word.chars().count();
    if n > 3 && word.ends_with("ly") {
        return Lex::Fixed(PosTag::Adv);
    }
    if n > 5 && word.ends_with("ing") {
        return Lex::UnknownIng;
    }
    if n > 4 && word.ends_with("ed") {
        return Lex::UnknownEd;
    }
    if n > 4 && ADJ_SUFFIXES.iter().any(|s| word.ends_with(s)) {
        return Lex::Fixed(PosTag::Adj);
    }
    Lex::Fixed(PosTag::Noun)
}

pub(crate) fn is_be_form(word: &str) -> bool {
    BE_FORMS.contains(&word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inflections() {
        let lex = Lexicon::get();
        assert_eq!(
            lex.lookup("explained"),
            Lex::Verb(VerbForm::PastOrParticiple)
        );
        assert_eq!(lex.lookup("gives"), Lex::Verb(VerbForm::ThirdSingular));
        assert_eq!(lex.lookup("looking"), Lex::Verb(VerbForm::Ing));
        assert_eq!(lex.lookup("taken"), Lex::Verb(VerbForm::Participle));
        assert_eq!(lex.lookup("put"), Lex::Verb(VerbForm::Base));
        assert_eq!(lex.lookup("tries"), Lex::Verb(VerbForm::ThirdSingular));
        assert_eq!(lex.lookup("stopped"), Lex::Verb(VerbForm::PastOrParticiple));
        assert!(lex.is_participle("put"));
        assert!(lex.is_participle("explained"));
        assert!(lex.is_participle("forgotten"));
        assert!(!lex.is_participle("took"));
        assert!(lex.is_participle("prowled"));
    }

    #[test]
    fn open_class_fallbacks() {
        let lex = Lexicon::get();
        assert_eq!(lex.lookup("incorrectly"), Lex::Fixed(PosTag::Adv));
        assert_eq!(lex.lookup("metaphysical"), Lex::Fixed(PosTag::Adj));
        assert_eq!(lex.lookup("window"), Lex::Fixed(PosTag::Noun));
        assert_eq!(lex.lookup("150"), Lex::Fixed(PosTag::Adj));
        assert_eq!(lex.lookup(","), Lex::Fixed(PosTag::Punct));
        assert_eq!(lex.lookup("nothing"), Lex::Fixed(PosTag::Noun));
        assert_eq!(lex.lookup("avowed"), Lex::UnknownEd);
        assert_eq!(lex.lookup("string"), Lex::Fixed(PosTag::Noun));
    }
}
