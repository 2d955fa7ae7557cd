#!/usr/bin/env python3
"""Generate bundled registry / quality-table / alias data files."""
import json, os

# (pipeline name, instr backend G=google N=nllb, response C=chatgpt else MT)
ROWS = [
    ("afrikaans","G","C"),("albanian","G","C"),("amharic","G","G"),("arabic","G","C"),
    ("armenian","G","G"),("azerbaijani","G","G"),("belarusian","G","G"),("bengali","G","G"),
    ("bosnian","G","C"),("bulgarian","G","C"),("catalan","G","C"),("cebuano","G","C"),
    ("chinese","G","C"),("croatian","G","C"),("czech","G","C"),("danish","G","C"),
    ("dutch","G","C"),("english","G","C"),("estonian","G","C"),("finnish","G","C"),
    ("french","G","C"),("galician","G","C"),("georgian","G","G"),("german","G","C"),
    ("gujarati","G","G"),("hausa","G","G"),("hebrew","G","C"),("hindi","G","C"),
    ("hungarian","G","C"),("icelandic","G","C"),("igbo","G","G"),("indonesian","G","C"),
    ("irish","G","C"),("italian","G","C"),("japanese","G","C"),("javanese","G","C"),
    ("kannada","G","G"),("kazakh","G","G"),("korean","G","C"),("lao","G","G"),
    ("latvian","G","C"),("lithuanian","G","C"),("luxembourgish","G","C"),("macedonian","G","C"),
    ("malagasy","G","G"),("malay","G","C"),("malayalam","G","G"),("marathi","G","G"),
    ("mongolian","G","G"),("nepali","G","G"),
    ("norwegian","G","C"),("persian","G","C"),("polish","G","C"),("portuguese","G","C"),
    ("romanian","G","C"),("russian","G","C"),("serbian","G","G"),("sindhi","G","G"),
    ("sinhala","G","G"),("slovak","G","C"),("slovenian","G","C"),("somali","G","G"),
    ("spanish","G","C"),("sundanese","G","G"),("swahili","G","C"),("swedish","G","C"),
    ("tamil","G","G"),("thai","G","G"),("turkish","G","G"),("ukrainian","G","C"),
    ("urdu","G","C"),("uzbek","G","G"),("vietnamese","G","C"),("welsh","G","C"),
    ("xhosa","G","G"),("yiddish","G","G"),("yoruba","G","G"),("zulu","G","G"),
    ("asturian","N","C"),("bashkir","N","N"),("breton","N","N"),("burmese","N","N"),
    ("frisian","N","N"),("fulah","N","N"),("gaelic","N","N"),("ganda","N","N"),
    ("greek","N","C"),("haitian","N","C"),("iloko","N","N"),("khmer","N","N"),
    ("lingala","N","N"),("northern_sotho","N","N"),("occitan","N","C"),("oriya","N","N"),
    ("panjabi","N","N"),("pashto","N","N"),("swati","N","N"),("tagalog","N","C"),
    ("tswana","N","N"),("wolof","N","N"),
]
assert len(ROWS) == 100, len(ROWS)

ALIASES = {
 "afrikaans":"afr_Latn","albanian":"als_Latn","amharic":"amh_Ethi","arabic":"arb_Arab",
 "armenian":"hye_Armn","azerbaijani":"azj_Latn","belarusian":"bel_Cyrl","bengali":"ben_Beng",
 "bosnian":"bos_Latn","bulgarian":"bul_Cyrl","catalan":"cat_Latn","cebuano":"ceb_Latn",
 "chinese":"zho_Hans","croatian":"hrv_Latn","czech":"ces_Latn","danish":"dan_Latn",
 "dutch":"nld_Latn","english":"eng_Latn","estonian":"est_Latn","finnish":"fin_Latn",
 "french":"fra_Latn","galician":"glg_Latn","georgian":"kat_Geor","german":"deu_Latn",
 "gujarati":"guj_Gujr","hausa":"hau_Latn","hebrew":"heb_Hebr","hindi":"hin_Deva",
 "hungarian":"hun_Latn","icelandic":"isl_Latn","igbo":"ibo_Latn","indonesian":"ind_Latn",
 "irish":"gle_Latn","italian":"ita_Latn","japanese":"jpn_Jpan","javanese":"jav_Latn",
 "kannada":"kan_Knda","kazakh":"kaz_Cyrl","korean":"kor_Hang","lao":"lao_Laoo",
 "latvian":"lvs_Latn","lithuanian":"lit_Latn","luxembourgish":"ltz_Latn","macedonian":"mkd_Cyrl",
 "malagasy":"plt_Latn","malay":"zsm_Latn","malayalam":"mal_Mlym","marathi":"mar_Deva",
 "mongolian":"khk_Cyrl","nepali":"npi_Deva","norwegian":"nob_Latn","persian":"pes_Arab",
 "polish":"pol_Latn","portuguese":"por_Latn","romanian":"ron_Latn","russian":"rus_Cyrl",
 "serbian":"srp_Cyrl","sindhi":"snd_Arab","sinhala":"sin_Sinh","slovak":"slk_Latn",
 "slovenian":"slv_Latn","somali":"som_Latn","spanish":"spa_Latn","sundanese":"sun_Latn",
 "swahili":"swh_Latn","swedish":"swe_Latn","tamil":"tam_Taml","thai":"tha_Thai",
 "turkish":"tur_Latn","ukrainian":"ukr_Cyrl","urdu":"urd_Arab","uzbek":"uzn_Latn",
 "vietnamese":"vie_Latn","welsh":"cym_Latn","xhosa":"xho_Latn","yiddish":"ydd_Hebr",
 "yoruba":"yor_Latn","zulu":"zul_Latn","asturian":"ast_Latn","bashkir":"bak_Cyrl",
 "breton":"bre_Latn","burmese":"mya_Mymr","frisian":"fry_Latn","fulah":"fuv_Latn",
 "gaelic":"gla_Latn","ganda":"lug_Latn","greek":"ell_Grek","haitian":"hat_Latn",
 "iloko":"ilo_Latn","khmer":"khm_Khmr","lingala":"lin_Latn","northern_sotho":"nso_Latn",
 "occitan":"oci_Latn","oriya":"ory_Orya","panjabi":"pan_Guru","pashto":"pbt_Arab",
 "swati":"ssw_Latn","tagalog":"tgl_Latn","tswana":"tsn_Latn","wolof":"wol_Latn",
}
assert set(ALIASES) == {r[0] for r in ROWS}

out = os.path.join(os.path.dirname(__file__), "..", "crates", "corpus", "data")
with open(os.path.join(out, "registry_100.jsonl"), "w") as f:
    for code, instr, resp in ROWS:
        entry = {
            "code": code,
            "name": " ".join(w.capitalize() for w in code.split("_")),
            "tier": "high" if resp == "C" else "low",
            "instr_backend": "primary_mt" if instr == "G" else "fallback_mt",
            "response_mode": "generate" if resp == "C" else "translate",
        }
        f.write(json.dumps(entry) + "\n")

with open(os.path.join(out, "quality_table.jsonl"), "w") as f:
    for code, _instr, resp in ROWS:
        row = {"lang": code, "score": 50.0 if resp == "C" else 5.0, "override": None}
        f.write(json.dumps(row) + "\n")

with open(os.path.join(out, "flores_aliases.json"), "w") as f:
    json.dump(ALIASES, f, indent=1, sort_keys=True)
    f.write("\n")
print("ok")

# Cross-lingual feedback registry: 30 languages, 21 high / 9 low.
CLHF_HIGH = ["arabic","basque","bengali","chinese","croatian","danish","dutch","french",
             "german","hindi","hungarian","indonesian","italian","portuguese","romanian",
             "russian","slovak","spanish","swedish","ukrainian","vietnamese"]
CLHF_LOW = ["armenian","gujarati","kannada","malayalam","marathi","nepali","serbian",
            "tamil","telugu"]
assert len(CLHF_HIGH) == 21 and len(CLHF_LOW) == 9

row_map = {r[0]: r for r in ROWS}
pipe_out = os.path.join(os.path.dirname(__file__), "..", "crates", "pipeline", "data")
os.makedirs(pipe_out, exist_ok=True)
with open(os.path.join(pipe_out, "registry_30.jsonl"), "w") as f:
    for code in CLHF_HIGH + CLHF_LOW:
        tier = "high" if code in CLHF_HIGH else "low"
        # basque/telugu are not in the 100-language table; default to
        # google-translated instructions with generated responses.
        _, instr, resp = row_map.get(code, (code, "G", "C"))
        entry = {
            "code": code,
            "name": " ".join(w.capitalize() for w in code.split("_")),
            "tier": tier,
            "instr_backend": "primary_mt" if instr == "G" else "fallback_mt",
            "response_mode": "generate" if resp == "C" else "translate",
        }
        f.write(json.dumps(entry) + "\n")
print("ok-30")

# Quality table lives with the pipeline crate that consumes it.
with open(os.path.join(pipe_out, "quality_table.jsonl"), "w") as f:
    for code, _instr, resp in ROWS:
        row = {"lang": code, "score": 50.0 if resp == "C" else 5.0, "override": None}
        f.write(json.dumps(row) + "\n")
print("ok-qt")
