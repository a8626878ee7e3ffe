//! Classic Porter (1980) suffix-stripping stemmer.
//!
//! Follows the published reference implementation, including its two
//! departures from the original rule list (`bli -> ble`, `logi -> log`).
//! Operates on ASCII lowercase words; anything else is returned unchanged.

pub fn porter_stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut stemmer = Stemmer {
        b: word.as_bytes().to_vec(),
        j: 0,
    };
    stemmer.step1ab();
    if stemmer.b.len() > 1 {
        stemmer.step1c();
        stemmer.step2();
        stemmer.step3();
        stemmer.step4();
        stemmer.step5();
    }
    String::from_utf8(stemmer.b).expect("ascii in, ascii out")
}

struct Stemmer {
    b: Vec<u8>,
    /// End of the stem (exclusive) once a suffix has been matched by `ends`.
    j: usize,
}

impl Stemmer {
    fn is_consonant(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in `b[..self.j]`.
    fn measure(&self) -> usize {
        let end = self.j;
        let mut i = 0;
        while i < end && self.is_consonant(i) {
            i += 1;
        }
        let mut m = 0;
        loop {
            while i < end && !self.is_consonant(i) {
                i += 1;
            }
            if i >= end {
                return m;
            }
            while i < end && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..self.j).any(|i| !self.is_consonant(i))
    }

    fn double_consonant(&self, end: usize) -> bool {
        end >= 2 && self.b[end - 1] == self.b[end - 2] && self.is_consonant(end - 1)
    }

    /// consonant-vowel-consonant ending at `end` (exclusive), last not w/x/y.
    fn cvc(&self, end: usize) -> bool {
        if end < 3 {
            return false;
        }
        let i = end - 1;
        if !self.is_consonant(i) || self.is_consonant(i - 1) || !self.is_consonant(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    fn ends(&mut self, suffix: &str) -> bool {
        let s = suffix.as_bytes();
        if s.len() > self.b.len() || !self.b.ends_with(s) {
            return false;
        }
        self.j = self.b.len() - s.len();
        true
    }

    fn set_to(&mut self, replacement: &str) {
        self.b.truncate(self.j);
        self.b.extend_from_slice(replacement.as_bytes());
    }

    fn replace_if_measured(&mut self, replacement: &str) {
        if self.measure() > 0 {
            self.set_to(replacement);
        }
    }

    fn step1ab(&mut self) {
        if self.b.ends_with(b"s") {
            if self.ends("sses") {
                self.b.truncate(self.b.len() - 2);
            } else if self.ends("ies") {
                self.set_to("i");
            } else if self.b.len() >= 2 && self.b[self.b.len() - 2] != b's' {
                self.b.pop();
            }
        }
        if self.ends("eed") {
            if self.measure() > 0 {
                self.b.pop();
            }
        } else if (self.ends("ed") || self.ends("ing")) && self.vowel_in_stem() {
            self.b.truncate(self.j);
            let k = self.b.len();
            self.j = k;
            if self.ends("at") || self.ends("bl") || self.ends("iz") {
                self.b.push(b'e');
            } else if self.double_consonant(k) {
                if !matches!(self.b[k - 1], b'l' | b's' | b'z') {
                    self.b.pop();
                }
            } else {
                self.j = k;
                if self.measure() == 1 && self.cvc(k) {
                    self.b.push(b'e');
                }
            }
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && self.vowel_in_stem() {
            let k = self.b.len();
            self.b[k - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("ational", "ate"),
            ("tional", "tion"),
            ("enci", "ence"),
            ("anci", "ance"),
            ("izer", "ize"),
            ("bli", "ble"),
            ("alli", "al"),
            ("entli", "ent"),
            ("eli", "e"),
            ("ousli", "ous"),
            ("ization", "ize"),
            ("ation", "ate"),
            ("ator", "ate"),
            ("alism", "al"),
            ("iveness", "ive"),
            ("fulness", "ful"),
            ("ousness", "ous"),
            ("aliti", "al"),
            ("iviti", "ive"),
            ("biliti", "ble"),
            ("logi", "log"),
        ];
        self.apply_first(RULES);
    }

    fn step3(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("icate", "ic"),
            ("ative", ""),
            ("alize", "al"),
            ("iciti", "ic"),
            ("ical", "ic"),
            ("ful", ""),
            ("ness", ""),
        ];
        self.apply_first(RULES);
    }

    /// Only the first matching suffix is considered, as in the reference
    /// switch on the penultimate letter.
    fn apply_first(&mut self, rules: &[(&str, &str)]) {
        if let Some((_, to)) = rules.iter().find(|(from, _)| self.ends(from)) {
            self.replace_if_measured(to);
        }
    }

    fn step4(&mut self) {
        const SUFFIXES: &[&str] = &[
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
            "ou", "ism", "ate", "iti", "ous", "ive", "ize",
        ];
        // "ement", "ment" and "ent" overlap; list order makes the longest win.
        let matched = SUFFIXES
            .iter()
            .find(|suffix| self.b.ends_with(suffix.as_bytes()));
        let Some(suffix) = matched else { return };
        self.ends(suffix);
        if *suffix == "ion" && !(self.j > 0 && matches!(self.b[self.j - 1], b's' | b't')) {
            return;
        }
        if self.measure() > 1 {
            self.b.truncate(self.j);
        }
    }

    fn step5(&mut self) {
        let k = self.b.len();
        self.j = k;
        if self.b[k - 1] == b'e' {
            self.j = k - 1;
            let m = self.measure();
            if m > 1 || (m == 1 && !self.cvc(k - 1)) {
                self.b.pop();
            }
        }
        let k = self.b.len();
        self.j = k;
        if self.b[k - 1] == b'l' && self.double_consonant(k) && self.measure() > 1 {
            self.b.pop();
        }
    }
}
