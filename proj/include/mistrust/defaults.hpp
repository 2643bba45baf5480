#pragma once

#include <string_view>

namespace mistrust::defaults {

// Small clinical-register sentiment lexicon, token<TAB>polarity in [-1,1].
// Users with a richer lexicon can pass their own TSV; the scorer only needs
// token -> polarity.
inline constexpr std::string_view kSentimentLexiconTsv = R"(comfortable	0.70
calm	0.65
stable	0.50
improving	0.70
improved	0.65
improves	0.60
alert	0.40
cooperative	0.70
pleasant	0.75
resting	0.45
rested	0.45
relaxed	0.60
supportive	0.60
reassured	0.55
reassuring	0.55
tolerating	0.45
tolerated	0.45
progressing	0.60
responsive	0.40
engaged	0.50
receptive	0.55
attentive	0.50
smiling	0.70
ambulating	0.45
ambulated	0.45
recovering	0.60
recovered	0.65
healing	0.55
satisfactory	0.50
favorable	0.60
encouraging	0.55
encouraged	0.50
motivated	0.55
adherent	0.60
agreeable	0.60
peaceful	0.65
restful	0.55
oriented	0.40
communicative	0.50
appreciative	0.65
thankful	0.70
grateful	0.75
optimistic	0.65
hopeful	0.60
content	0.55
well	0.40
good	0.70
better	0.55
best	0.75
strong	0.50
steady	0.40
clear	0.35
eager	0.50
willing	0.50
friendly	0.65
warm	0.50
kind	0.60
gentle	0.50
painless	0.60
afebrile	0.35
normotensive	0.35
extubated	0.40
weaned	0.40
interactive	0.50
participates	0.50
participating	0.50
independent	0.55
intact	0.35
organized	0.40
appropriate	0.40
compliant	0.60
denies	0.20
resolved	0.60
resolving	0.50
unremarkable	0.35
benign	0.40
reassures	0.50
cheerful	0.75
jovial	0.70
talkative	0.40
energetic	0.55
playful	0.60
sleeping	0.30
soothed	0.55
consolable	0.45
manageable	0.40
controlled	0.40
effective	0.45
successful	0.60
success	0.60
excellent	0.80
great	0.70
wonderful	0.80
perfect	0.80
nicely	0.55
smoothly	0.55
uneventful	0.40
agitated	-0.70
combative	-0.80
confused	-0.55
anxious	-0.55
anxiety	-0.50
distressed	-0.70
distress	-0.65
uncomfortable	-0.60
deteriorating	-0.80
deteriorated	-0.80
unresponsive	-0.70
refused	-0.60
refuses	-0.60
refusing	-0.60
refusal	-0.55
uncooperative	-0.70
hostile	-0.80
angry	-0.70
anger	-0.65
upset	-0.60
frustrated	-0.60
frustrating	-0.55
withdrawn	-0.50
lethargic	-0.50
restless	-0.50
labored	-0.55
worsening	-0.75
worsened	-0.75
declining	-0.65
declined	-0.50
critical	-0.65
unstable	-0.70
septic	-0.70
febrile	-0.45
hypotensive	-0.55
delirious	-0.60
delirium	-0.60
disoriented	-0.50
tearful	-0.55
crying	-0.60
cry	-0.50
pain	-0.55
painful	-0.65
suffering	-0.75
vomiting	-0.55
nausea	-0.45
nauseous	-0.45
bleeding	-0.60
hemorrhage	-0.70
failure	-0.65
failing	-0.65
failed	-0.60
arrest	-0.75
difficult	-0.50
difficulty	-0.45
poor	-0.60
poorly	-0.60
worse	-0.65
worst	-0.80
bad	-0.60
severe	-0.60
noncompliant	-0.65
noncompliance	-0.60
resistant	-0.50
resisting	-0.55
defiant	-0.65
argumentative	-0.60
abusive	-0.80
threatening	-0.75
yelling	-0.65
screaming	-0.75
moaning	-0.55
grimacing	-0.50
guarding	-0.40
rigid	-0.40
unarousable	-0.65
obtunded	-0.60
comatose	-0.70
dying	-0.85
terminal	-0.70
grave	-0.75
dire	-0.75
miserable	-0.80
exhausted	-0.55
fatigued	-0.45
fatigue	-0.40
weak	-0.50
weakness	-0.45
dyspnea	-0.50
dyspneic	-0.50
hypoxic	-0.60
desaturated	-0.60
tachycardic	-0.45
somnolent	-0.40
apneic	-0.65
struggling	-0.65
struggle	-0.55
decompensated	-0.75
decompensating	-0.75
unwilling	-0.55
mistrustful	-0.65
suspicious	-0.50
paranoid	-0.60
inconsolable	-0.70
complains	-0.45
complaint	-0.40
complaining	-0.45
aggressive	-0.60
agitation	-0.65
erratic	-0.55
sad	-0.60
depressed	-0.60
depression	-0.55
hopeless	-0.80
fearful	-0.60
afraid	-0.60
scared	-0.60
)";

// Interpersonal chart item whitelist: the coded-event categories analyzed by
// the pipeline (normalized item labels, one per line).
inline constexpr std::string_view kInterpersonalWhitelist = R"(# interpersonal chart items
family meeting
family meeting held
family communication
family updated
patient education
education readiness
education topic
education barrier
education method
restraint
restraint type
restraint location
reason for restraint
restraint (non-violent)
restraint device
pain
pain level
pain level (rest)
pain present
pain assess method
pain management
pain type
pain location
healthcare proxy
health care proxy
healthcare proxy status
code status
support systems
support system
social work consult
spiritual support
riker-sas scale
richmond-ras scale
state
behavioral state
behavior
bath
bathing
assistance with bathing
)";

}  // namespace mistrust::defaults
