//! Writes the synthetic fixture corpus used by the acceptance suite.
//!
//! cargo run -p tweetseq --example gen_fixture -- [OUT] [N] [SEED]

use std::path::PathBuf;

use tweetseq::datasets::to_generic_csv;
use tweetseq::report::write_atomic;
use tweetseq_core::rng::SeedStream;
use tweetseq_core::{Document, Label, LabeledCorpus, Source};

const INSULTS: [&str; 14] = [
    "stupid",
    "idiot",
    "trash",
    "loser",
    "ugly",
    "pathetic",
    "disgusting",
    "moron",
    "dumb",
    "garbage",
    "worthless",
    "clown",
    "freak",
    "scum",
];
const INSULT_NOISE: [&str; 10] =
    ["stuuuupid", "idiooooot", "traaaash", "looooser", "uglyyyy", "dumbbbbb", "stupidd", "idoit", "garbge", "pathetc"];
const HATE_TAGS: [&str; 8] =
    ["#stupidpeople", "#shutup", "#gohome", "#hatethem", "#trashpeople", "#sendthemback", "#uglytruth", "#dumbpeople"];
const HATE_SLANG: [&str; 7] = ["stfu", "gtfo", "h8", "ur", "u r", "wtf", "ppl"];
const HATE_EMOJI: [&str; 5] = ["😠", "😡", "🤬", ">:(", "🖕"];
const TARGETS: [&str; 8] = ["people", "women", "immigrants", "them", "those guys", "fans", "neighbors", "everyone"];
const HATE_FRAMES: [&str; 8] = [
    "{who} are so {insult}",
    "you're a {insult} and everyone knows it",
    "{slang} {insult} {who}",
    "don't let those {insult} {who} near us",
    "i h8 {who} they're {insult}",
    "all {who} r {insult} honestly",
    "can't stand {insult} {who}",
    "shut up you {insult}",
];

const NICE: [&str; 14] = [
    "love",
    "great",
    "happy",
    "fun",
    "amazing",
    "beautiful",
    "awesome",
    "lovely",
    "excited",
    "thankful",
    "proud",
    "blessed",
    "sunny",
    "delicious",
];
const NICE_NOISE: [&str; 10] = [
    "loooove",
    "greaaaat",
    "happpyyy",
    "amaaazing",
    "awesomeee",
    "excitedddd",
    "beautifull",
    "lovley",
    "amazng",
    "deliciouss",
];
const NICE_TAGS: [&str; 8] = [
    "#happyhumpday",
    "#goodvibes",
    "#lovemylife",
    "#weekendfun",
    "#coffeetime",
    "#usedbytrendypeople",
    "#familyfirst",
    "#gameday",
];
const NICE_SLANG: [&str; 7] = ["2nite", "gr8", "thx", "lol", "luv", "omg", "2moro"];
const NICE_EMOJI: [&str; 5] = ["😊", ":)", "<3", "🎉", "👍"];
const TOPICS: [&str; 10] =
    ["coffee", "weekend", "music", "game", "friends", "dinner", "movie", "beach", "concert", "family"];
const NICE_FRAMES: [&str; 8] = [
    "this {topic} is {nice}",
    "we're going to the {topic} {slang}",
    "{slang} what a {nice} {topic}",
    "i don't know why but the {topic} was {nice}",
    "can't wait for the {topic} it's {nice}",
    "feeling {nice} about the {topic}",
    "i hate mondays but the {topic} was {nice}",
    "my {topic} today was {nice}",
];

const FILLERS: [&str; 8] = ["rt @user:", "@friend", "http://t.co/x1y2z3", "lol82211", "just", "today", "&amp;", "so"];
const NEUTRAL: [&str; 40] = [
    "day", "time", "work", "home", "phone", "car", "bus", "city", "night", "morning", "school", "class", "team",
    "news", "show", "video", "photo", "post", "week", "year", "street", "store", "traffic", "weather", "rain",
    "office", "boss", "kids", "mom", "dad", "brother", "sister", "game", "season", "match", "radio", "book", "song",
    "line", "place",
];
const CUES_HATE: [&str; 12] =
    ["#stupidpeople", "#trashpeople", "#dumbpeople", "#hatethem", "😠", "😡", "🤬", ">:(", "stfu", "gtfo", "h8", "🖕"];
const CUES_NICE: [&str; 12] =
    ["#happyhumpday", "#goodvibes", "#lovemylife", "#weekendfun", "😊", ":)", "<3", "🎉", "gr8", "thx", "luv", "👍"];

fn pick<'a>(rng: &mut SeedStream, items: &[&'a str]) -> &'a str {
    items[rng.index(items.len())]
}

fn chance(rng: &mut SeedStream, p: f64) -> bool {
    rng.unit() < p
}

fn neutral(rng: &mut SeedStream, n: usize) -> String {
    (0..n).map(|_| pick(rng, &NEUTRAL)).collect::<Vec<_>>().join(" ")
}

fn tweet(rng: &mut SeedStream, hateful: bool) -> String {
    let style = rng.unit();
    let mut text = if style < 0.3 {
        // Only a cue that needs normalizing (hashtag, emoji or slang) carries the class.
        let cue = pick(rng, if hateful { &CUES_HATE } else { &CUES_NICE });
        let n = 2 + rng.index(4);
        format!("{} {cue} {}", neutral(rng, n), neutral(rng, 1))
    } else if hateful {
        let insult = if style < 0.6 { pick(rng, &INSULT_NOISE) } else { pick(rng, &INSULTS) };
        pick(rng, &HATE_FRAMES)
            .replace("{insult}", insult)
            .replace("{who}", pick(rng, &TARGETS))
            .replace("{slang}", pick(rng, &HATE_SLANG))
    } else {
        let nice = if style < 0.6 { pick(rng, &NICE_NOISE) } else { pick(rng, &NICE) };
        pick(rng, &NICE_FRAMES)
            .replace("{nice}", nice)
            .replace("{topic}", pick(rng, &TOPICS))
            .replace("{slang}", pick(rng, &NICE_SLANG))
    };
    // Words of the other class used in passing.
    if chance(rng, 0.2) {
        let other = if hateful { pick(rng, &NICE) } else { pick(rng, &INSULTS) };
        text = format!("{text} {other} {}", neutral(rng, 1));
    }
    let (tags, emoji): (&[&str], &[&str]) = if hateful { (&HATE_TAGS, &HATE_EMOJI) } else { (&NICE_TAGS, &NICE_EMOJI) };
    if chance(rng, 0.25) {
        text = format!("{text} {}", pick(rng, tags));
    }
    if chance(rng, 0.2) {
        text = format!("{text} {}", pick(rng, emoji));
    }
    let n = rng.index(4);
    if n > 0 {
        text = format!("{} {text}", neutral(rng, n));
    }
    if chance(rng, 0.4) {
        text = format!("{} {text}", pick(rng, &FILLERS));
    }
    if chance(rng, 0.25) {
        text = format!("{text} {}", pick(rng, &FILLERS));
    }
    if chance(rng, 0.2) {
        text = text.to_uppercase();
    }
    if chance(rng, 0.3) {
        text.push_str(if hateful { "!!!" } else { "!" });
    }
    text
}

fn main() {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "crates/tweetseq/data/fixture.csv".into()));
    let n: usize = args.next().map(|a| a.parse().expect("N is a count")).unwrap_or(2000);
    let seed: u64 = args.next().map(|a| a.parse().expect("SEED is an integer")).unwrap_or(2024);
    let mut rng = SeedStream::new(seed, 0);
    let mut docs = Vec::with_capacity(n);
    for i in 0..n {
        let hateful = chance(&mut rng, 0.35);
        let text = tweet(&mut rng, hateful);
        // Label noise.
        let label = Label::from_positive(hateful != chance(&mut rng, 0.06));
        docs.push(Document { id: format!("fx{i:05}"), text, label, source: Source::Generic });
    }
    let corpus = LabeledCorpus::new(docs);
    write_atomic(&out, to_generic_csv(&corpus).as_bytes()).expect("write fixture");
    let c = corpus.class_counts();
    println!("wrote {} ({} inappropriate, {} normal) to {}", corpus.len(), c.inappropriate, c.normal, out.display());
}
